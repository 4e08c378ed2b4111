//! L_A(f, chi, s) for f = eta(z)^6 eta(3z)^6: functional equation, central
//! derivative and the Petersson norm of f.

use heegner::heckechar::HeckeChar;
use heegner::lseries::{central_derivative, fe_residual, ingest_eigenform, lambda_completed, petersson_quadrature, rs_coefficients};
use heegner::quadfield::Disc;
use std::path::PathBuf;

fn main() -> heegner::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/3.6.a.a.txt");
    let f = ingest_eigenform(&path, 6, 3)?;
    for d in [-11, -23] {
        let disc = Disc::new(d)?;
        let chi = HeckeChar::new(&disc, 1, 0, 128)?;
        for cls in 0..disc.h() {
            let s = rs_coefficients(&f, &chi, cls, 3000)?;
            let cd = central_derivative(&s)?;
            println!(
                "D = {d} class {cls}: sign {}  FE residual {:.1e}  Lambda(4) = {:.1e}  L'(4) = {:.12}",
                s.sign,
                fe_residual(&s, 4.5)?,
                lambda_completed(&s, 4.0, 1.0)?.norm(),
                cd.value
            );
        }
    }
    let pf = petersson_quadrature(&f, 32)?;
    println!("(f, f) = {:.10e}  (mesh change {:.1e})", pf.value, pf.mesh_change);
    Ok(())
}
