//! Reduced forms, the class group and Heegner points of level 3.

use heegner::quadfield::Disc;

fn main() -> heegner::Result<()> {
    for d in [-11, -23, -47] {
        let disc = Disc::new(d)?;
        println!("D = {d}: h = {}", disc.h());
        for cls in 0..disc.h() {
            let p = disc.heegner_point(3, 1, cls)?;
            println!("  class {cls} {}  point {p}  tau = {}", disc.cg.forms[cls], p.tau(64));
        }
        for (d1, d2) in disc.splittings() {
            let chars: Vec<i32> = (0..disc.h()).map(|c| disc.genus_character(d1, d2, c)).collect::<Result<_, _>>()?;
            println!("  genus character {d1} * {d2}: {chars:?}");
        }
    }
    Ok(())
}
