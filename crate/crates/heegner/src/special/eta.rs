//! Dedekind eta function.

use rug::Float;

use super::num::{pi, Complex};
use crate::error::{Error, Result};

/// eta(z)^4 = q^{1/6} prod_{n>=1} (1 - q^n)^4 with q = e^{2 pi i z}.
pub fn dedekind_eta4(z: &Complex) -> Result<Complex> {
    if z.im <= 0 {
        return Err(Error::Domain("eta needs Im z > 0".into()));
    }
    let prec = z.prec();
    let wp = prec + 32;
    let zw = z.with_prec(wp);
    let two_pi_i = Complex::new(Float::new(wp), Float::with_val(wp, pi(wp) * 2u32));
    let q = (&two_pi_i * &zw).exp();
    let q6 = (&two_pi_i * &zw.scale(&(Float::with_val(wp, 1) / 6u32))).exp();
    let qa = q.abs();
    let thr = Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 16));
    let mut prod = Complex::one(wp);
    let mut qn = q.clone();
    let mut qn_abs = qa.clone();
    while qn_abs > thr {
        let f = &Complex::one(wp) - &qn;
        prod = &prod * &f;
        qn = &qn * &q;
        qn_abs *= &qa;
    }
    let p4 = prod.powu(4);
    Ok((&q6 * &p4).with_prec(prec))
}

/// log|2 pi eta^4(z)|, the quantity entering the regularised diagonal.
pub fn log_abs_2pi_eta4(z: &Complex) -> Result<Float> {
    let e = dedekind_eta4(z)?;
    let p = z.prec();
    Ok(e.abs().ln() + Float::with_val(p, pi(p) * 2u32).ln())
}
