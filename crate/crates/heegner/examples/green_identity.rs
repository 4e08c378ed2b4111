//! Lattice sums of the Green's kernel over Hecke correspondences against the
//! Q-series side, and the algebraicity of a relation's combination.

use heegner::fourier::find_relation;
use heegner::green::{algebraicity, identity_residual, GreenConfig};
use heegner::heckechar::HeckeChar;
use heegner::quadfield::Disc;
use heegner::special::jacobi::JacobiIndex;
use rug::Rational;

fn main() -> heegner::Result<()> {
    let disc = Disc::new(-11)?;
    let chi = HeckeChar::new(&disc, 1, 0, 128)?;
    let cfg = GreenConfig::new(JacobiIndex::new(3, 1)?, 3, 1, 4000, 128)?;
    for m in [1i64, 2, 5, 7] {
        let r = identity_residual(&cfg, &chi, m, 0)?;
        println!(
            "m = {m}: lattice {:.20}  series {:.20}  residual {:.1e}  tail {:.1e}",
            r.lhs.re, r.rhs.re, r.residual, r.lhs_tail
        );
    }
    // a_f(2) = -6, a_f(7) = -40 for the weight 6 newform of level 3
    let lambda = find_relation(&[vec![Rational::from(-6), Rational::from(-40)]], &[2, 7])?;
    let a = algebraicity(&cfg, &chi, 0, &lambda)?;
    println!("sum lambda_m G_m = {:.12}", a.lhs.re);
    println!("                 = {} = {:.12}  (residual {:.1e})", a.rhs, a.rhs_value, a.residual);
    Ok(())
}
