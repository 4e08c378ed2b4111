//! L(1, eps_D) in closed form and L'/L(1, eps_D) by two independent routes.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::quadfield::{factorize, kronecker, Disc};
use crate::special::num::pi;

/// L(1, eps_D) = (h/u) * pi / sqrt|D|, kept in structured form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct L1Exact {
    pub d: i64,
    pub h: u64,
    pub u: u32,
}

impl L1Exact {
    pub fn ratio(&self) -> Rational {
        Rational::from((self.h, self.u))
    }

    pub fn value(&self, prec: u32) -> Float {
        let s = Float::with_val(prec, -self.d).sqrt();
        pi(prec) * self.ratio() / s
    }
}

pub fn l1_exact(disc: &Disc) -> L1Exact {
    L1Exact { d: disc.d, h: disc.h() as u64, u: disc.u }
}

/// Both estimates of L'/L(1, eps_D) and their difference.
#[derive(Clone, Debug)]
pub struct DualRoute {
    pub smoothed: Float,
    pub hurwitz: Float,
    /// L(1) recovered by the smoothed series, for cross-checks.
    pub l1_smoothed: Float,
}

impl DualRoute {
    pub fn discrepancy(&self) -> f64 {
        Float::with_val(self.smoothed.prec(), &self.smoothed - &self.hurwitz).abs().to_f64()
    }
}

fn cache() -> &'static RwLock<HashMap<(i64, u32), Float>> {
    static C: OnceLock<RwLock<HashMap<(i64, u32), Float>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// L'/L(1, eps_D), memoized, after checking both routes agree.
pub fn lprime_over_l_1(disc: &Disc, prec: u32) -> Result<Float> {
    if let Some(v) = cache().read().expect("cache lock").get(&(disc.d, prec)) {
        return Ok(v.clone());
    }
    let r = dual_route(disc.d, prec);
    let tol = f64::powi(2.0, -(prec as i32 - 16)).max(1e-300);
    let got = r.discrepancy();
    if got > tol {
        return Err(Error::Convergence { what: format!("L'/L(1) for D = {}", disc.d), achieved: got, requested: tol });
    }
    let v = r.hurwitz;
    cache().write().expect("cache lock").insert((disc.d, prec), v.clone());
    Ok(v)
}

pub fn dual_route(d: i64, prec: u32) -> DualRoute {
    let (smoothed, l1_smoothed) = smoothed_route(d, prec);
    DualRoute { smoothed, hurwitz: hurwitz_route(d, prec), l1_smoothed }
}

// f(s) = sum eps(n) n^{-s} (q/pi)^{(s+1)/2} Gamma((s+1)/2, pi n^2 / q);
// Lambda(s) = (q/pi)^{(s+1)/2} Gamma((s+1)/2) L(s) = f(s) + f(1 - s).
fn smoothed_f(d: i64, s: &Float, wp: u32) -> Float {
    let q = -d;
    let qpi = Float::with_val(wp, q) / pi(wp);
    let a = Float::with_val(wp, s + 1u32) / 2u32;
    let pre = Float::with_val(wp, qpi.ln_ref()) * &a;
    let pre = pre.exp();
    let cutoff = ((q as f64) * (wp as f64 * 0.7 + 40.0) / std::f64::consts::PI).sqrt() as i64 + 2;
    let mut sum = Float::new(wp);
    for n in 1..=cutoff {
        let e = kronecker(d, n);
        if e == 0 {
            continue;
        }
        let x = Float::with_val(wp, n * n) * pi(wp) / q;
        let g = a.clone().gamma_inc(&x);
        let ns = (Float::with_val(wp, n).ln() * s).exp();
        let term = g / ns;
        if e > 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum * pre
}

fn smoothed_route(d: i64, prec: u32) -> (Float, Float) {
    let wp = 2 * prec + 32;
    let h = Float::with_val(wp, 1) >> (prec / 4 + 4);
    let deriv = |s0: u32| {
        let s0 = Float::with_val(wp, s0);
        let f = |k: i32| smoothed_f(d, &Float::with_val(wp, &s0 + Float::with_val(wp, &h * k)), wp);
        let num = (f(1) - f(-1)) * 8u32 - (f(2) - f(-2));
        num / (Float::with_val(wp, &h * 12u32))
    };
    let one = Float::with_val(wp, 1);
    let zero = Float::new(wp);
    let lam1 = smoothed_f(d, &one, wp) + smoothed_f(d, &zero, wp);
    let dlam = deriv(1) - deriv(0);
    let q = Float::with_val(wp, -d);
    let qpi = Float::with_val(wp, &q / pi(wp));
    // Lambda(1) = (q / pi) L(1) since Gamma(1) = 1
    let l1 = Float::with_val(wp, &lam1 / &qpi);
    // psi(1) = -gamma
    let gamma = Float::with_val(wp, rug::float::Constant::Euler);
    let lpl = dlam / lam1 - qpi.ln() / 2u32 + gamma / 2u32;
    (Float::with_val(prec, lpl), Float::with_val(prec, l1))
}

fn bernoulli_even(count: usize) -> Vec<Rational> {
    // B_0..B_{2 count} by the standard recurrence
    let n = 2 * count;
    let mut b = vec![Rational::new(); n + 1];
    b[0] = Rational::from(1);
    for m in 1..=n {
        let mut s = Rational::new();
        for (k, bk) in b.iter().enumerate().take(m) {
            s += Rational::from(Integer::from(Integer::binomial_u(m as u32 + 1, k as u32)) * bk);
        }
        b[m] = -s / (m as u32 + 1);
    }
    (1..=count).map(|j| b[2 * j].clone()).collect()
}

/// Generalized Stieltjes constant gamma_1(x), x > 0, by Euler-Maclaurin.
pub fn stieltjes1(x: &Float, prec: u32) -> Float {
    let wp = prec + 32;
    let m = prec.max(96) as u64;
    let terms = (prec / 4).max(24) as usize;
    let mut s = Float::new(wp);
    for k in 0..m {
        let t = Float::with_val(wp, x + k);
        s += Float::with_val(wp, t.ln_ref()) / t;
    }
    let y = Float::with_val(wp, x + m);
    let ly = Float::with_val(wp, y.ln_ref());
    s -= Float::with_val(wp, ly.square_ref()) / 2u32;
    s += Float::with_val(wp, &ly / &y) / 2u32;
    let y2 = Float::with_val(wp, y.square_ref());
    let mut ypow = y2.clone();
    let mut harm = Rational::from(1);
    for (j, b) in bernoulli_even(terms).iter().enumerate() {
        let j = j + 1;
        // H_{2j-1}
        if j > 1 {
            harm += Rational::from((1, 2 * j as u64 - 2));
            harm += Rational::from((1, 2 * j as u64 - 1));
        }
        let c = Rational::from(b / (2 * j as u32));
        let num = Float::with_val(wp, &ly - &harm) * &c;
        s += num / &ypow;
        ypow *= &y2;
    }
    Float::with_val(prec, s)
}

fn hurwitz_route(d: i64, prec: u32) -> Float {
    let wp = prec + 32;
    let q = -d;
    let mut sp = Float::new(wp);
    let mut sg = Float::new(wp);
    for a in 1..q {
        let e = kronecker(d, a);
        if e == 0 {
            continue;
        }
        let x = Float::with_val(wp, a) / q;
        let psi = Float::with_val(wp, x.digamma_ref());
        let g1 = stieltjes1(&x, wp);
        if e > 0 {
            sp += psi;
            sg += g1;
        } else {
            sp -= psi;
            sg -= g1;
        }
    }
    // L(1) = -(1/q) sum eps psi, L'(1) = -log q L(1) - (1/q) sum eps gamma_1
    let lq = Float::with_val(wp, q).ln();
    let ratio = sg / sp;
    Float::with_val(prec, ratio - lq)
}

/// L(1, eps_D) from the digamma sum, a third independent value.
pub fn l1_digamma(d: i64, prec: u32) -> Float {
    let wp = prec + 16;
    let q = -d;
    let mut s = Float::new(wp);
    for a in 1..q {
        let x = Float::with_val(wp, a) / q;
        s += Float::with_val(wp, x.digamma_ref()) * kronecker(d, a);
    }
    Float::with_val(prec, -s / q)
}

/// Dirichlet coefficients of L^{(N)}(eps_D, s): eps(n) if (n, N) = 1, else 0.
pub fn deprived_coefficients(d: i64, level: u64, upto: u64) -> Vec<i32> {
    let ps: Vec<u64> = factorize(level).into_iter().map(|(p, _)| p).collect();
    (0..=upto)
        .map(|n| if n == 0 || ps.iter().any(|p| n % p == 0) { 0 } else { kronecker(d, n as i64) })
        .collect()
}

/// Coefficients of L(eps_D, s) * prod_{p | N} (1 - eps(p) p^{-s}), by convolution.
pub fn euler_deprived_by_convolution(d: i64, level: u64, upto: u64) -> Vec<i32> {
    let mut c: Vec<i32> = (0..=upto).map(|n| if n == 0 { 0 } else { kronecker(d, n as i64) }).collect();
    for (p, _) in factorize(level) {
        let ep = kronecker(d, p as i64);
        let mut next = c.clone();
        for n in 1..=upto {
            if n % p == 0 {
                next[n as usize] -= ep * c[(n / p) as usize];
            }
        }
        c = next;
    }
    c
}
