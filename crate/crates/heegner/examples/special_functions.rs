//! Q_{k,t} three ways, its ODE residual, and the Dedekind eta function.

use heegner::special::eta::dedekind_eta4;
use heegner::special::jacobi::{q_kt_oracle, JacobiIndex, QKernel, QRoute};
use heegner::special::num::Complex;
use rug::Float;

fn main() -> heegner::Result<()> {
    let prec = 128;
    for (k, t) in [(2, 1), (3, 1), (4, 2)] {
        let idx = JacobiIndex::new(k, t)?;
        let q = QKernel::new(idx);
        for xv in [1.5, 10.0] {
            let x = Float::with_val(prec, xv);
            let closed = q.eval(&x)?;
            let quad = q_kt_oracle(idx, &x, QRoute::Quadrature)?;
            let hyp = q_kt_oracle(idx, &x, QRoute::Hypergeometric)?;
            println!(
                "Q_{{{k},{t}}}({xv}) = {:.30}  quad diff {:.1e}  hyp diff {:.1e}  ode {:.1e}",
                closed,
                Float::with_val(prec, &closed - &quad).abs().to_f64(),
                Float::with_val(prec, &closed - &hyp).abs().to_f64(),
                q.ode_residual(&x)?.to_f64().abs()
            );
        }
    }
    let z = Complex::from_f64(prec, 0.0, 1.0);
    println!("eta(i)^4 = {}", dedekind_eta4(&z)?);
    Ok(())
}
