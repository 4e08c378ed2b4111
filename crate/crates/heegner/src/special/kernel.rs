//! The radial kernel of the Green's function and the harmonicity check.

use rug::Float;

use super::jacobi::{JacobiIndex, QKernel};
use super::num::Complex;
use crate::error::{Error, Result};

/// 1 + |z - z'|^2 / (2 y y'), the hyperbolic cosine of the distance.
pub fn cosh_distance(z: &Complex, w: &Complex) -> Result<Float> {
    if z.im <= 0 || w.im <= 0 {
        return Err(Error::Domain("points must lie in the upper half-plane".into()));
    }
    let p = z.prec();
    let d = (z - w).norm();
    if d.is_zero() {
        return Err(Error::Coincidence);
    }
    let den = Float::with_val(p, &z.im * &w.im) * 2u32;
    Ok(d / den + 1u32)
}

/// g_{k,t}(z, z') = -Q_{k,t}(cosh d(z, z')).
pub fn green_kernel(q: &QKernel, z: &Complex, w: &Complex) -> Result<Float> {
    let x = cosh_distance(z, w)?;
    Ok(-q.eval(&x)?)
}

/// mu^+ = g ((z - conj z')/(2 i y'))^{2t}, mu^- = g ((conj z - z')/(2 i y))^{2t}.
pub fn mu(q: &QKernel, sign: i32, z: &Complex, w: &Complex) -> Result<Complex> {
    let p = z.prec();
    let g = green_kernel(q, z, w)?;
    let two_i = Complex::new(Float::new(p), Float::with_val(p, 2));
    let factor = if sign >= 0 {
        (z - &w.conj()).div(&two_i.scale(&w.im))
    } else {
        (&z.conj() - w).div(&two_i.scale(&z.im))
    };
    Ok(factor.powu(2 * q.idx.t).scale(&g))
}

#[derive(Clone, Debug)]
pub struct HarmonicityReport {
    /// |Delta_{+-t} mu - lambda mu| / max(|lambda mu|, |each operator term|) at the requested step.
    pub residual: f64,
    /// Same residual at half the step.
    pub residual_half_step: f64,
    /// True when halving the step shrinks the residual like step^4, i.e. the
    /// value is dominated by finite-difference truncation.
    pub step_dominated: bool,
}

fn fd_residual(q: &QKernel, sign: i32, z: &Complex, w: &Complex, h: &Float) -> Result<f64> {
    let p = z.prec();
    let at = |dx: i32, dy: i32| -> Result<Complex> {
        let ww = Complex::new(
            Float::with_val(p, &w.re + Float::with_val(p, h * dx)),
            Float::with_val(p, &w.im + Float::with_val(p, h * dy)),
        );
        mu(q, sign, z, &ww)
    };
    let f0 = at(0, 0)?;
    let (xp1, xp2, xm1, xm2) = (at(1, 0)?, at(2, 0)?, at(-1, 0)?, at(-2, 0)?);
    let (yp1, yp2, ym1, ym2) = (at(0, 1)?, at(0, 2)?, at(0, -1)?, at(0, -2)?);
    let twelve_h = Float::with_val(p, h * 12u32);
    let twelve_h2 = Float::with_val(p, h.square_ref()) * 12u32;
    let c8 = Float::with_val(p, 8);
    let c16 = Float::with_val(p, 16);
    let c30 = Float::with_val(p, 30);
    let d1 = |p1: &Complex, p2: &Complex, m1: &Complex, m2: &Complex| -> Complex {
        let s = &(&(p1 - m1).scale(&c8) - p2) + m2;
        s.scale(&Float::with_val(p, twelve_h.recip_ref()))
    };
    let d2 = |p1: &Complex, p2: &Complex, m1: &Complex, m2: &Complex| -> Complex {
        let s = &(&(&(p1 + m1).scale(&c16) - &f0.scale(&c30)) - p2) - m2;
        s.scale(&Float::with_val(p, twelve_h2.recip_ref()))
    };
    let fx = d1(&xp1, &xp2, &xm1, &xm2);
    let fy = d1(&yp1, &yp2, &ym1, &ym2);
    let fxx = d2(&xp1, &xp2, &xm1, &xm2);
    let fyy = d2(&yp1, &yp2, &ym1, &ym2);
    let y = &w.im;
    let y2 = Float::with_val(p, y.square_ref());
    // Delta = -y'^2 (d_xx + d_yy); the first-order term is +-2 i t y' (d_x + i d_y)
    let lap = (&fxx + &fyy).scale(&Float::with_val(p, -&y2));
    let dbar = &fx + &fy.mul_i();
    let first = dbar.mul_i().scale(&Float::with_val(p, y * (2 * q.idx.t as i64 * sign.signum() as i64)));
    let op = &lap + &first;
    let lam = Float::with_val(p, q.idx.lambda(sign));
    let target = f0.scale(&lam);
    let num = (&op - &target).abs();
    // lambda vanishes when k - t = 1 and sign < 0; scale by the operator terms too
    let den = target.abs().max(&lap.abs()).max(&first.abs());
    Ok((num / den).to_f64())
}

/// Relative residual of Delta_{+-t} mu^{+-} = lambda_{+-t} mu^{+-}, with
/// derivatives in z' by fourth-order central differences.
pub fn harmonicity_residual(idx: JacobiIndex, sign: i32, z: &Complex, w: &Complex, step: f64) -> Result<HarmonicityReport> {
    let q = QKernel::new(idx);
    let p = z.prec();
    let h = Float::with_val(p, step);
    let h2 = Float::with_val(p, step / 2.0);
    let r1 = fd_residual(&q, sign, z, w, &h)?;
    let r2 = fd_residual(&q, sign, z, w, &h2)?;
    let step_dominated = r1 > 1e-6 && r2 > 0.0 && r1 / r2 > 8.0;
    Ok(HarmonicityReport { residual: r1, residual_half_step: r2, step_dominated })
}
