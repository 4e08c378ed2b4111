//! Partial theta coefficients of a Hecke character and the divisor sums
//! sigma, sigma' that pair with them.

use heegner::arithsums::SigmaContext;
use heegner::heckechar::{theta_tables, HeckeChar};
use heegner::quadfield::Disc;

fn main() -> heegner::Result<()> {
    let disc = Disc::new(-23)?;
    let chi = HeckeChar::new(&disc, 1, 1, 128)?;
    let tabs = theta_tables(&chi, 30)?;
    for n in 1..=30u64 {
        let row: Vec<String> = tabs.iter().map(|t| format!("{:>22}", t.r_complex(n, 53).to_string())).collect();
        if tabs.iter().any(|t| !t.is_zero(n)) {
            println!("r({n:>2}) {}", row.join(" "));
        }
    }
    let ctx = SigmaContext::new(&disc, 3, 1, 0)?;
    for n in 1..=12 {
        println!("sigma({n}) = {:>2}   sigma'({n}) = {}", ctx.sigma(n), ctx.sigma_prime(n));
    }
    Ok(())
}
