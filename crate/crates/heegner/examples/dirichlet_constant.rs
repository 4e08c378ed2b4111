//! L(1, eps_D) and L'/L(1, eps_D) by two independent routes.

use heegner::dirichlet::{dual_route, l1_exact};
use heegner::quadfield::Disc;

fn main() -> heegner::Result<()> {
    for d in [-11, -23, -47, -71] {
        let disc = Disc::new(d)?;
        let r = dual_route(d, 160);
        println!(
            "D = {d:>3}: L(1) = {:.25}  L'/L(1) = {:.30}  routes differ by {:.1e}",
            l1_exact(&disc).value(160),
            r.hurwitz,
            r.discrepancy()
        );
    }
    Ok(())
}
