//! Double-exponential quadrature at arbitrary precision.

use rug::Float;

use super::num::pi;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub prec: u32,
    /// Stop once successive levels agree to 2^-tol_bits relative.
    pub tol_bits: u32,
    pub max_level: u32,
}

impl QuadOptions {
    pub fn new(prec: u32) -> Self {
        QuadOptions { prec, tol_bits: prec.saturating_sub(8), max_level: 14 }
    }
}

fn converged(cur: &Float, prev: &Float, tol_bits: u32) -> (bool, f64) {
    let p = cur.prec();
    let err = Float::with_val(p, cur - prev).abs();
    let scale = Float::with_val(p, cur.abs_ref()).max(&Float::with_val(p, 1e-300));
    let rel = Float::with_val(p, &err / &scale);
    let thr = Float::with_val(p, Float::i_exp(1, -(tol_bits as i32)));
    (rel <= thr, rel.to_f64())
}

/// Generic level-doubling trapezoid on the real line of `g(t)`, where `g`
/// already contains the change of variables and Jacobian.
fn doubling<G: FnMut(&Float) -> Float>(mut g: G, tmax: f64, opts: QuadOptions, what: &str) -> Result<Float> {
    let p = opts.prec;
    let h0 = 0.5_f64;
    let mut total = Float::new(p);
    let mut j = 0i64;
    loop {
        let t = Float::with_val(p, j) * h0;
        if t.to_f64() > tmax {
            break;
        }
        total += g(&t);
        if j > 0 {
            total += g(&Float::with_val(p, -&t));
        }
        j += 1;
    }
    let mut estimate = Float::with_val(p, &total * h0);
    let mut h = h0;
    let mut last_rel = f64::INFINITY;
    for level in 1..=opts.max_level {
        h /= 2.0;
        let mut fresh = Float::new(p);
        let mut j = 1i64;
        loop {
            let t = Float::with_val(p, j) * h;
            if t.to_f64() > tmax {
                break;
            }
            fresh += g(&t);
            fresh += g(&Float::with_val(p, -&t));
            j += 2;
        }
        let next = Float::with_val(p, &estimate / 2) + Float::with_val(p, &fresh * h);
        let (ok, rel) = converged(&next, &estimate, opts.tol_bits);
        estimate = next;
        last_rel = rel;
        if ok && level >= 3 {
            return Ok(estimate);
        }
    }
    Err(Error::Convergence {
        what: what.to_string(),
        achieved: last_rel,
        requested: 2f64.powi(-(opts.tol_bits as i32)),
    })
}

/// Tanh-sinh rule for a finite interval [a, b].
pub fn tanh_sinh<F: FnMut(&Float) -> Float>(mut f: F, a: &Float, b: &Float, opts: QuadOptions) -> Result<Float> {
    let p = opts.prec;
    let half_pi = pi(p) / 2;
    let c = Float::with_val(p, a + b) / 2;
    let r = Float::with_val(p, b - a) / 2;
    let tmax = (((p + 20) as f64 * std::f64::consts::LN_2) / std::f64::consts::PI).asinh();
    let g = |t: &Float| -> Float {
        let s = Float::with_val(p, &half_pi * Float::with_val(p, t.sinh_ref()));
        let cs = Float::with_val(p, s.cosh_ref());
        let x = Float::with_val(p, &c + Float::with_val(p, &r * Float::with_val(p, s.tanh_ref())));
        let w: Float = Float::with_val(p, &half_pi * Float::with_val(p, t.cosh_ref())) / cs.square() * &r;
        if w.is_zero() {
            return Float::new(p);
        }
        f(&x) * w
    };
    doubling(g, tmax, opts, "tanh-sinh quadrature")
}

/// Integral over the whole real line of a function decaying at least like
/// e^{-|w|} once |w| exceeds `shift`. Uses w = pi sinh(t), the composition of
/// the compactification u = tanh(w/2) with the tanh-sinh rule on (-1, 1).
pub fn real_line<F: FnMut(&Float) -> Float>(mut f: F, shift: f64, opts: QuadOptions) -> Result<Float> {
    let p = opts.prec;
    let pi_p = pi(p);
    let wmax = shift + (p + 24) as f64 * std::f64::consts::LN_2;
    let tmax = (wmax / std::f64::consts::PI).asinh();
    let g = |t: &Float| -> Float {
        let w = Float::with_val(p, &pi_p * Float::with_val(p, t.sinh_ref()));
        let jac = Float::with_val(p, &pi_p * Float::with_val(p, t.cosh_ref()));
        f(&w) * jac
    };
    doubling(g, tmax, opts, "real-line quadrature")
}

/// f64 tanh-sinh on [a, b], used by the double-precision L-series code.
pub fn tanh_sinh_f64<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let hp = std::f64::consts::FRAC_PI_2;
    let tmax = 3.2;
    let mut g = |t: f64| {
        let s = hp * t.sinh();
        let w = hp * t.cosh() / s.cosh().powi(2) * r;
        if w == 0.0 {
            0.0
        } else {
            f(c + r * s.tanh()) * w
        }
    };
    let mut h = 0.5;
    let mut sum = g(0.0);
    let mut j = 1;
    while j as f64 * h <= tmax {
        let t = j as f64 * h;
        sum += g(t) + g(-t);
        j += 1;
    }
    let mut est = sum * h;
    for level in 1..=10 {
        h /= 2.0;
        let mut fresh = 0.0;
        let mut j = 1;
        while j as f64 * h <= tmax {
            let t = j as f64 * h;
            fresh += g(t) + g(-t);
            j += 2;
        }
        let next = est / 2.0 + fresh * h;
        let done = (next - est).abs() <= rel_tol * next.abs().max(1e-300);
        est = next;
        if done && level >= 3 {
            return Ok(est);
        }
    }
    Err(Error::Convergence { what: "f64 tanh-sinh".into(), achieved: f64::NAN, requested: rel_tol })
}
