//! Jacobi polynomials P_n^{(a,b)}, the polynomials W_{n-1}^{(0,2t)} and the
//! Jacobi functions of the second kind Q_{k,t}.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::num::{binomial, euler_gamma, factorial, from_integer};
use super::poly::{FloatPoly, RatPoly};
use super::quad::{real_line, tanh_sinh, QuadOptions};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JacobiIndex {
    pub k: u32,
    pub t: u32,
}

impl JacobiIndex {
    pub fn new(k: u32, t: u32) -> Result<Self> {
        if k == 0 || t + 1 > k {
            return Err(Error::Domain(format!("need 0 <= t <= k-1, got k={k}, t={t}")));
        }
        Ok(JacobiIndex { k, t })
    }

    /// Degree k - t - 1 of P_{k,t}.
    pub fn n(&self) -> u32 {
        self.k - self.t - 1
    }

    /// lambda_{+t} (sign = +1) or lambda_{-t} (sign = -1).
    pub fn lambda(&self, sign: i32) -> i64 {
        let (k, t) = (self.k as i64, self.t as i64);
        if sign >= 0 {
            -(k + t - 1) * (k - t)
        } else {
            -(k - t - 1) * (k + t)
        }
    }
}

/// Rising factorial (a)_m at the precision of `a`.
fn pochhammer(a: &Float, m: u32) -> Float {
    let mut acc = Float::with_val(a.prec(), 1);
    for i in 0..m {
        acc *= Float::with_val(a.prec(), a + i);
    }
    acc
}

/// P_n^{(alpha,beta)}(x) from the explicit finite sum, for real parameters.
pub fn jacobi_p(n: u32, alpha: &Float, beta: &Float, x: &Float) -> Float {
    let p = x.prec();
    let half = Float::with_val(p, x - 1u32) / 2u32;
    let ab1 = Float::with_val(p, alpha + beta) + (n + 1);
    let nf = from_integer(p, &factorial(n as u64));
    let mut sum = Float::new(p);
    let mut pw = Float::with_val(p, 1);
    for j in 0..=n {
        let a = Float::with_val(p, alpha + (j + 1));
        let c = from_integer(p, &binomial(n as u64, j as u64)) * pochhammer(&a, n - j) * pochhammer(&ab1, j);
        sum += c * &pw;
        pw *= &half;
    }
    sum / nf
}

fn rat_pochhammer(a: &Rational, m: u32) -> Rational {
    let mut acc = Rational::from(1);
    for i in 0..m {
        acc *= Rational::from(a + i);
    }
    acc
}

/// P_n^{(a,b)} as an exact polynomial for integer parameters.
pub fn jacobi_poly(n: u32, a: i64, b: i64) -> RatPoly {
    let half = RatPoly::new(vec![Rational::from((-1, 2)), Rational::from((1, 2))]);
    let ab1 = Rational::from(a + b + n as i64 + 1);
    let nf = Rational::from(factorial(n as u64));
    let mut out = RatPoly::zero();
    let mut pw = RatPoly::one();
    for j in 0..=n {
        let aj = Rational::from(a + j as i64 + 1);
        let c = Rational::from(binomial(n as u64, j as u64)) * rat_pochhammer(&aj, n - j) * rat_pochhammer(&ab1, j);
        out = out.add(&pw.scale(&(c / &nf)));
        pw = pw.mul(&half);
    }
    out
}

/// P_{k,t} = P_{k-t-1}^{(0,2t)}.
pub fn p_kt_poly(idx: JacobiIndex) -> RatPoly {
    jacobi_poly(idx.n(), 0, 2 * idx.t as i64)
}

/// P_{k,t} from its Rodrigues-type definition with k+t-1 derivatives.
pub fn p_kt_rodrigues(idx: JacobiIndex) -> RatPoly {
    let (k, t) = (idx.k, idx.t);
    let base = RatPoly::new(vec![Rational::from(-1), Rational::new(), Rational::from(1)])
        .pow(k - t - 1)
        .mul(&RatPoly::linear(-1, 1).pow(2 * t));
    let d = base.nth_derivative(k + t - 1);
    let norm = Integer::from(Integer::u_pow_u(2, k - t - 1)) * factorial((k + t - 1) as u64);
    d.scale(&Rational::from((Integer::from(1), norm)))
}

pub fn p_kt(idx: JacobiIndex, x: &Float) -> Float {
    p_kt_poly(idx).eval(x)
}

/// W^{(0,2t)}_{n-1} with n = k-t-1, from the product-sum formula.
pub fn w_kt_poly(idx: JacobiIndex) -> RatPoly {
    let n = idx.n();
    if n == 0 {
        return RatPoly::zero();
    }
    let (k, t) = (idx.k as i64, idx.t as i64);
    let mut s = RatPoly::zero();
    for j in 0..n {
        let a = jacobi_poly(j, 0, -2 * t);
        let b = jacobi_poly(n - 1 - j, 0, 2 * t);
        let den = (j as i64 + 1) * (k + t - 1 - j as i64);
        s = s.add(&a.mul(&b).scale(&Rational::from((1, den))));
    }
    let pre = Rational::from(Integer::from(Integer::u_pow_u(2, 2 * idx.t)) * (k + t));
    s.scale(&pre)
}

pub fn w_kt(idx: JacobiIndex, x: &Float) -> Float {
    w_kt_poly(idx).eval(x)
}

/// W^{(0,2t)}_{n-1}(x) by quadrature of its defining integral over [-1, 1].
pub fn w_kt_quadrature(idx: JacobiIndex, x: &Float) -> Result<Float> {
    let prec = x.prec();
    let pn = p_kt_poly(idx);
    let px = pn.eval(x);
    let two_t = 2 * idx.t;
    let a = Float::with_val(prec, -1);
    let b = Float::with_val(prec, 1);
    tanh_sinh(
        |u| {
            let num = Float::with_val(prec, &px - pn.eval(u));
            let den = Float::with_val(prec, x - u);
            let w = Float::with_val(prec, u + 1u32).pow(two_t);
            num / den * w
        },
        &a,
        &b,
        QuadOptions::new(prec),
    )
}

/// Harmonic number H_n as an exact rational.
pub fn harmonic(n: u32) -> Rational {
    let mut h = Rational::new();
    for j in 1..=n {
        h += Rational::from((1, j));
    }
    h
}

/// psi(n) = -gamma + H_{n-1} for integers n >= 1.
pub fn digamma_int(n: u32, prec: u32) -> Float {
    assert!(n >= 1, "digamma_int needs n >= 1");
    Float::with_val(prec, &harmonic(n - 1)) - euler_gamma(prec)
}

/// psi(k+t) + psi(k-t) - 2 psi(1), exactly.
pub fn psi_pair(idx: JacobiIndex) -> Rational {
    harmonic(idx.k + idx.t - 1) + harmonic(idx.k - idx.t - 1)
}

/// The closed form Q_{k,t}(x) = P(x) log((x+1)/(x-1)) + T(x)/(x+1)^{2t},
/// with T = P R - W exact. Built once per index and reused.
#[derive(Clone, Debug)]
pub struct QKernel {
    pub idx: JacobiIndex,
    p: RatPoly,
    tpoly: RatPoly,
}

/// Q and its first two derivatives.
#[derive(Clone, Debug)]
pub struct QDerivs {
    pub q: Float,
    pub dq: Float,
    pub d2q: Float,
}

impl QKernel {
    pub fn new(idx: JacobiIndex) -> Self {
        let t2 = 2 * idx.t;
        let xp1 = RatPoly::linear(1, 1);
        let xm1 = RatPoly::linear(-1, 1);
        let mut r = RatPoly::zero();
        for j in 1..=t2 {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let c = Rational::from(binomial(t2 as u64, j as u64)) * Rational::from((sign, j as i64));
            let diff = xp1.pow(j).sub(&xm1.pow(j));
            r = r.add(&xp1.pow(t2 - j).mul(&diff).scale(&c));
        }
        let p = p_kt_poly(idx);
        let tpoly = p.mul(&r).sub(&w_kt_poly(idx));
        QKernel { idx, p, tpoly }
    }

    /// Extra bits to absorb the cancellation between the two terms, which
    /// grows like x^{2k-2}.
    pub fn guard_bits(&self, x: f64) -> u32 {
        let lg = if x > 1.0 { x.log2() } else { 0.0 };
        32 + ((2.0 * self.idx.k as f64 - 2.0) * lg.max(0.0)).ceil() as u32
    }

    fn parts(&self, x: &Float) -> (Float, FloatPoly, FloatPoly) {
        let wp = x.prec();
        // log((x+1)/(x-1)) = log1p(2/(x-1))
        let l = (Float::with_val(wp, 2) / Float::with_val(wp, x - 1u32)).ln_1p();
        (l, self.p.to_float(wp), self.tpoly.to_float(wp))
    }

    /// Q_{k,t}(x) for real x > 1, returned at the precision of `x`.
    pub fn eval(&self, x: &Float) -> Result<Float> {
        if *x <= 1 {
            return Err(Error::Domain(format!("Q_kt needs x > 1, got {}", x.to_f64())));
        }
        let prec = x.prec();
        let wp = prec + self.guard_bits(x.to_f64());
        let xw = Float::with_val(wp, x);
        let v = self.eval_wp(&xw);
        Ok(Float::with_val(prec, v))
    }

    /// Q_{k,t} at an exact rational argument.
    pub fn eval_rational(&self, x: &Rational, prec: u32) -> Result<Float> {
        if *x <= 1 {
            return Err(Error::Domain("Q_kt needs x > 1".into()));
        }
        let wp = prec + self.guard_bits(x.to_f64());
        let xw = Float::with_val(wp, x);
        Ok(Float::with_val(prec, self.eval_wp(&xw)))
    }

    fn eval_wp(&self, x: &Float) -> Float {
        let wp = x.prec();
        let (l, p, t) = self.parts(x);
        let xp1 = Float::with_val(wp, x + 1u32);
        let den = xp1.pow(2 * self.idx.t);
        p.eval(x) * l + t.eval(x) / den
    }

    /// Q, Q', Q'' from the closed form with exact polynomial derivatives.
    pub fn eval_derivs(&self, x: &Float) -> Result<QDerivs> {
        if *x <= 1 {
            return Err(Error::Domain("Q_kt needs x > 1".into()));
        }
        let prec = x.prec();
        let wp = prec + self.guard_bits(x.to_f64()) + 16;
        let x = Float::with_val(wp, x);
        let (l, _, _) = self.parts(&x);
        let xx1 = Float::with_val(wp, x.square_ref()) - 1u32;
        // L' = -2/(x^2-1), L'' = 4x/(x^2-1)^2
        let dl = Float::with_val(wp, -2) / &xx1;
        let d2l = Float::with_val(wp, &x * 4u32) / Float::with_val(wp, xx1.square_ref());
        let p0 = self.p.eval(&x);
        let p1 = self.p.derivative().eval(&x);
        let p2 = self.p.nth_derivative(2).eval(&x);
        let t0 = self.tpoly.eval(&x);
        let t1 = self.tpoly.derivative().eval(&x);
        let t2 = self.tpoly.nth_derivative(2).eval(&x);
        let tt = 2 * self.idx.t;
        let xp1 = Float::with_val(wp, &x + 1u32);
        let inv = Float::with_val(wp, xp1.clone().pow(tt)).recip();
        let inv1 = Float::with_val(wp, &inv / &xp1);
        let inv2 = Float::with_val(wp, &inv1 / &xp1);
        // R = T (x+1)^{-2t}
        let r0 = Float::with_val(wp, &t0 * &inv);
        let r1 = Float::with_val(wp, &t1 * &inv) - Float::with_val(wp, &t0 * &inv1) * tt;
        let r2 = Float::with_val(wp, &t2 * &inv) - Float::with_val(wp, &t1 * &inv1) * (2 * tt)
            + Float::with_val(wp, &t0 * &inv2) * (tt * (tt + 1));
        let q = Float::with_val(wp, &p0 * &l) + r0;
        let dq = Float::with_val(wp, &p1 * &l) + Float::with_val(wp, &p0 * &dl) + r1;
        let d2q = Float::with_val(wp, &p2 * &l) + Float::with_val(wp, &p1 * &dl) * 2u32 + Float::with_val(wp, &p0 * &d2l) + r2;
        Ok(QDerivs { q: Float::with_val(prec, q), dq: Float::with_val(prec, dq), d2q: Float::with_val(prec, d2q) })
    }

    /// (1-x^2)Q'' + [2t - (2t+2)x]Q' + (k-t-1)(k+t)Q.
    pub fn ode_residual(&self, x: &Float) -> Result<Float> {
        let prec = x.prec();
        let wp = prec + self.guard_bits(x.to_f64()) + 16;
        let xw = Float::with_val(wp, x);
        let d = self.eval_derivs(&xw)?;
        let t = self.idx.t as i64;
        let c = (self.idx.k as i64 - t - 1) * (self.idx.k as i64 + t);
        let a = Float::with_val(wp, 1) - Float::with_val(wp, xw.square_ref());
        let b = Float::with_val(wp, 2 * t) - Float::with_val(wp, &xw * (2 * t + 2));
        let r = a * d.d2q + b * d.dq + d.q * c;
        Ok(Float::with_val(prec, r))
    }
}

/// Q_{k,t}(x) from the closed form.
pub fn q_kt_closed(idx: JacobiIndex, x: &Float) -> Result<Float> {
    QKernel::new(idx).eval(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QRoute {
    Quadrature,
    Hypergeometric,
}

/// Independent evaluations of Q_{k,t}, for cross-checking the closed form.
pub fn q_kt_oracle(idx: JacobiIndex, x: &Float, route: QRoute) -> Result<Float> {
    if *x <= 1 {
        return Err(Error::Domain("Q_kt needs x > 1".into()));
    }
    match route {
        QRoute::Quadrature => q_by_quadrature(idx, x),
        QRoute::Hypergeometric => q_by_series(idx, x),
    }
}

fn q_by_quadrature(idx: JacobiIndex, x: &Float) -> Result<Float> {
    let prec = x.prec();
    let wp = prec + 24;
    let xw = Float::with_val(wp, x);
    let s = (Float::with_val(wp, xw.square_ref()) - 1u32).sqrt();
    let x1 = Float::with_val(wp, &xw + 1u32);
    let c = Float::with_val(wp, Float::i_exp(1, 2 * idx.t as i32));
    let (e1, e2) = (idx.k - idx.t, 2 * idx.t);
    let shift = (2.0 * x.to_f64() / s.to_f64()).ln().max(0.0) + 4.0;
    let mut opts = QuadOptions::new(wp);
    opts.tol_bits = prec + 4;
    let v = real_line(
        |w| {
            let ch = Float::with_val(wp, w.cosh_ref());
            let ew = Float::with_val(wp, w.exp_ref());
            let a = Float::with_val(wp, &xw + Float::with_val(wp, &s * &ch));
            let b = Float::with_val(wp, &x1 + Float::with_val(wp, &s * &ew));
            Float::with_val(wp, &c / (a.pow(e1) * b.pow(e2)))
        },
        shift,
        opts,
    )?;
    Ok(Float::with_val(prec, v))
}

/// Gauss series sum_j (a)_j (b)_j / ((c)_j j!) z^j for |z| < 1.
fn hyp2f1(a: &Float, b: &Float, c: &Float, z: &Float, max_terms: usize) -> Result<Float> {
    let p = z.prec();
    let mut sum = Float::with_val(p, 1);
    let mut term = Float::with_val(p, 1);
    let thr = Float::with_val(p, Float::i_exp(1, -(p as i32) - 8));
    for j in 0..max_terms {
        let jf = j as u32;
        term *= Float::with_val(p, a + jf) * Float::with_val(p, b + jf);
        term /= Float::with_val(p, c + jf) * (jf + 1);
        term *= z;
        sum += &term;
        if Float::with_val(p, term.abs_ref()) <= Float::with_val(p, &thr * Float::with_val(p, sum.abs_ref())) && j > 4 {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        what: "2F1 series".into(),
        achieved: (term / sum).to_f64().abs(),
        requested: 2f64.powi(-(p as i32)),
    })
}

fn q_by_series(idx: JacobiIndex, x: &Float) -> Result<Float> {
    let prec = x.prec();
    let wp = prec + 32;
    let xw = Float::with_val(wp, x);
    let n = idx.n();
    let t2 = 2 * idx.t;
    // 2 * 2^{n+2t} n! (n+2t)! / (2n+2t+1)!
    let pre = Float::with_val(
        wp,
        Integer::from(Integer::u_pow_u(2, n + t2 + 1)) * factorial(n as u64) * factorial((n + t2) as u64),
    ) / from_integer(wp, &factorial((2 * n + t2 + 1) as u64));
    let xm1 = Float::with_val(wp, &xw - 1u32);
    let xp1 = Float::with_val(wp, &xw + 1u32);
    let a = Float::with_val(wp, n + 1);
    let c = Float::with_val(wp, 2 * n + t2 + 2);
    let f = if *x > 3 {
        let z = Float::with_val(wp, -2) / &xm1;
        hyp2f1(&a, &a, &c, &z, 2_000_000)?
    } else {
        // Pfaff: F(a,a;c;z) = (1-z)^{-a} F(a, c-a; c; z/(z-1)), z/(z-1) = 2/(x+1)
        let w = Float::with_val(wp, 2) / &xp1;
        let cb = Float::with_val(wp, &c - &a);
        let ratio = Float::with_val(wp, &xm1 / &xp1).pow(n + 1);
        ratio * hyp2f1(&a, &cb, &c, &w, 2_000_000)?
    };
    let v = pre * f / (xm1.pow(n + 1) * xp1.pow(t2));
    Ok(Float::with_val(prec, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, v: f64) -> Float {
        Float::with_val(p, v)
    }

    #[test]
    fn index_guard() {
        assert!(JacobiIndex::new(2, 2).is_err());
        assert!(JacobiIndex::new(3, 1).is_ok());
        assert_eq!(JacobiIndex::new(3, 1).unwrap().lambda(-1), -4);
        let i = JacobiIndex::new(4, 0).unwrap();
        assert_eq!(i.lambda(1), i.lambda(-1));
    }

    #[test]
    fn low_degree_polys() {
        let x = f(128, 0.5);
        assert_eq!(jacobi_p(1, &f(128, 0.0), &f(128, 0.0), &x), 0.5);
        assert_eq!(jacobi_p(0, &f(128, 0.0), &f(128, 2.0), &f(128, 7.25)), 1);
        let i21 = JacobiIndex::new(2, 1).unwrap();
        assert_eq!(p_kt_poly(i21), RatPoly::one());
        assert_eq!(p_kt_poly(JacobiIndex::new(2, 0).unwrap()), RatPoly::linear(0, 1));
        assert_eq!(p_kt_poly(JacobiIndex::new(3, 1).unwrap()), RatPoly::linear(-1, 2));
    }

    #[test]
    fn w_values() {
        assert!(w_kt_poly(JacobiIndex::new(2, 1).unwrap()).is_zero());
        assert_eq!(w_kt_poly(JacobiIndex::new(3, 1).unwrap()), RatPoly::constant(Rational::from((16, 3))));
    }

    #[test]
    fn q21_closed_form() {
        let i = JacobiIndex::new(2, 1).unwrap();
        let v = q_kt_closed(i, &f(128, 3.0)).unwrap();
        let want = Float::with_val(128, rug::float::Constant::Log2) - Float::with_val(128, 0.625);
        assert!((v - want).abs() < 1e-36);
    }

    #[test]
    fn domain() {
        let i = JacobiIndex::new(2, 1).unwrap();
        assert!(q_kt_closed(i, &f(64, 1.0)).is_err());
    }

    #[test]
    fn psi_values() {
        assert_eq!(Float::with_val(128, digamma_int(2, 128) - digamma_int(1, 128)), 1);
        assert_eq!(psi_pair(JacobiIndex::new(3, 1).unwrap()), Rational::from((17, 6)));
    }
}
