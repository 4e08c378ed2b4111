//! a_m = a_fin + a_inf for weight 6 and level 3, compared with the
//! eigenform eta(z)^6 eta(3z)^6, and an integer relation among them.

use heegner::fourier::{admissible_support, find_relation, FourierEngine, FourierParams, RelationCondition};
use heegner::heckechar::{HeckeChar, ThetaTable};
use heegner::lseries::ingest_eigenform;
use heegner::quadfield::Disc;
use heegner::special::jacobi::JacobiIndex;
use rug::Rational;
use std::path::PathBuf;

fn main() -> heegner::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/3.6.a.a.txt");
    let f = ingest_eigenform(&path, 6, 3)?;
    let disc = Disc::new(-11)?;
    let chi = HeckeChar::new(&disc, 1, 0, 128)?;
    let idx = JacobiIndex::new(3, 1)?;
    let eng = FourierEngine::new(FourierParams::new(idx, 3, 1, chi.clone(), 0, 20_000)?, 10)?;
    for m in [1u64, 2, 4, 5, 7, 8, 10] {
        let a = eng.a_m(m)?;
        println!(
            "m = {m:>2}: a_m = {:>24.15}  a_fin = {}  a_m / a_f(m) = {:.10}",
            a.real(),
            eng.a_fin_exact(m)?,
            a.real().to_f64() / f.a(m) as f64
        );
    }
    let theta = ThetaTable::new(&chi, 0, 20)?;
    let sup = admissible_support(&(1..=20).collect::<Vec<_>>(), 3, &theta, RelationCondition::CoprimeDiagonalFree);
    let rows = vec![sup[..2].iter().map(|&m| Rational::from(f.a(m))).collect()];
    println!("relation on {:?}: {:?}", &sup[..2], find_relation(&rows, &sup[..2])?);
    Ok(())
}
