//! The Rankin-Selberg series L_A(f, chi, s): eigenform ingestion, Dirichlet
//! coefficients, the completed function by a smoothed approximate functional
//! equation, the central derivative and a Petersson-norm quadrature.
//!
//! Everything here runs in double precision; the tolerances downstream are
//! 1e-6 or looser.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, gamma_ur};

use crate::error::{Error, Result};
use crate::heckechar::{HeckeChar, ThetaTable};
use crate::quadfield::{factorize, gcd, kronecker};
use crate::special::quad::tanh_sinh_f64;

/// A normalised newform with an exact coefficient table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Eigenform {
    /// The weight 2k.
    pub weight: u32,
    pub level: u64,
    /// a_f(n) at index n; index 0 is unused.
    pub coeffs: Vec<i64>,
    pub provenance: String,
}

impl Eigenform {
    pub fn new(weight: u32, level: u64, coeffs: Vec<i64>, provenance: &str) -> Result<Self> {
        if weight % 2 != 0 || weight < 2 {
            return Err(Error::Precondition(format!("weight {weight} must be even and at least 2")));
        }
        if coeffs.len() < 2 || coeffs[1] != 1 {
            return Err(Error::Domain("a_f(1) must be 1".into()));
        }
        let f = Eigenform { weight, level, coeffs, provenance: provenance.to_string() };
        f.check_multiplicative(50)?;
        Ok(f)
    }

    /// Parse "n a_n" lines; '#' starts a comment.
    pub fn parse(text: &str, weight: u32, level: u64, provenance: &str) -> Result<Self> {
        let mut coeffs = vec![0i64];
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Format { line: i + 1, msg: msg.to_string() };
            let mut it = line.split_whitespace();
            let (Some(n), Some(a), None) = (it.next(), it.next(), it.next()) else {
                return Err(bad("expected \"n a_n\""));
            };
            let n: usize = n.parse().map_err(|_| bad("bad index"))?;
            let a: i64 = a.replace('\u{2212}', "-").parse().map_err(|_| bad("bad coefficient"))?;
            if n != coeffs.len() {
                return Err(bad(&format!("expected index {}, found {n}", coeffs.len())));
            }
            coeffs.push(a);
        }
        Eigenform::new(weight, level, coeffs, provenance)
    }

    pub fn k(&self) -> u32 {
        self.weight / 2
    }

    /// Largest n with a known coefficient.
    pub fn len(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn a(&self, n: u64) -> i64 {
        self.coeffs[n as usize]
    }

    fn check_multiplicative(&self, bound: u64) -> Result<()> {
        let len = self.len();
        for m in 2..=bound {
            for n in m + 1..=bound {
                if m * n > len || gcd(m as i64, n as i64) != 1 {
                    continue;
                }
                if self.a(m) as i128 * self.a(n) as i128 != self.a(m * n) as i128 {
                    return Err(Error::Multiplicativity { m, n });
                }
            }
        }
        Ok(())
    }
}

pub fn ingest_eigenform(path: &Path, weight: u32, level: u64) -> Result<Eigenform> {
    let text = std::fs::read_to_string(path)?;
    Eigenform::parse(&text, weight, level, &path.display().to_string())
}

/// Dirichlet coefficients and Gamma data of L_A(f, chi, s).
#[derive(Clone, Debug)]
pub struct RSSeries {
    pub k: u32,
    pub t: u32,
    pub level: u64,
    pub d: i64,
    /// b_n at index n; index 0 is unused.
    pub coeffs: Vec<Complex64>,
    /// Lambda(s) = A^s Gamma(s) Gamma(s - 2t) L(s) with A = N|D| / (4 pi^2).
    pub conductor: f64,
    /// w in Lambda(s) = w Lambda(2k + 2t - s); w = -eps_K(N).
    pub sign: i32,
}

impl RSSeries {
    pub fn center(&self) -> f64 {
        (self.k + self.t) as f64
    }

    /// 2k + 2t.
    pub fn kappa(&self) -> f64 {
        2.0 * self.center()
    }

    pub fn upto(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn gamma_factor(&self, s: f64) -> f64 {
        self.conductor.powf(s) * gamma(s) * gamma(s - 2.0 * self.t as f64)
    }

    /// Coefficientwise sum, for class additivity.
    pub fn add(&self, o: &RSSeries) -> RSSeries {
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
        out
    }
}

/// -eps_K(N).
pub fn root_number(d: i64, level: u64) -> i32 {
    -kronecker(d, level as i64)
}

fn coeffs_from_r(f: &Eigenform, r: impl Fn(u64) -> Complex64, d: i64, t: u32, upto: u64) -> Vec<Complex64> {
    let ps: Vec<u64> = factorize(f.level).into_iter().map(|(p, _)| p).collect();
    let e = 2 * (f.k() + t) - 1;
    let mut b = vec![Complex64::new(0.0, 0.0); upto as usize + 1];
    let mut dd = 1u64;
    while dd * dd <= upto {
        let eps = kronecker(d, dd as i64);
        if eps != 0 && !ps.iter().any(|p| dd % p == 0) {
            let w = eps as f64 * (dd as f64).powi(e as i32);
            for ee in 1..=upto / (dd * dd) {
                let a = f.a(ee);
                if a != 0 {
                    b[(dd * dd * ee) as usize] += r(ee) * (w * a as f64);
                }
            }
        }
        dd += 1;
    }
    b
}

fn series(f: &Eigenform, chi: &HeckeChar, coeffs: Vec<Complex64>) -> RSSeries {
    let d = chi.disc.d;
    RSSeries {
        k: f.k(),
        t: chi.t,
        level: f.level,
        d,
        coeffs,
        conductor: f.level as f64 * d.unsigned_abs() as f64 / (4.0 * PI * PI),
        sign: root_number(d, f.level),
    }
}

fn to_c64(z: &crate::special::num::Complex) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

/// b_n = sum_{d^2 e = n, (d, N) = 1} eps_K(d) d^{2k+2t-1} a_f(e) r_{A,chi}(e).
pub fn rs_coefficients(f: &Eigenform, chi: &HeckeChar, cls: usize, upto: u64) -> Result<RSSeries> {
    if f.len() < upto {
        return Err(Error::InsufficientCoefficients { needed: upto, have: f.len() });
    }
    let theta = ThetaTable::new(chi, cls, upto)?;
    let prec = chi.prec;
    let b = coeffs_from_r(f, |n| to_c64(&theta.r_complex(n, prec)), chi.disc.d, chi.t, upto);
    Ok(series(f, chi, b))
}

/// The full L(f, chi, s), summed over all classes.
pub fn rs_coefficients_total(f: &Eigenform, chi: &HeckeChar, upto: u64) -> Result<RSSeries> {
    let mut acc = rs_coefficients(f, chi, 0, upto)?;
    for cls in 1..chi.disc.h() {
        acc = acc.add(&rs_coefficients(f, chi, cls, upto)?);
    }
    Ok(acc)
}

/// Gamma(a, x) for a > 0, x > 0.
fn upper_gamma(a: f64, x: f64) -> f64 {
    if x > 700.0 {
        return 0.0;
    }
    gamma_ur(a, x) * gamma(a)
}

/// I_s(c) = int_1^inf phi(c y) y^{s-1} dy, where phi(x) = 2 x^{-t} K_{2t}(2 sqrt x) has
/// Mellin transform Gamma(s) Gamma(s - 2t). Expanding K as an integral over theta:
/// I_s(c) = 4 c^{-s} int_0^inf cosh(2t th) (2 cosh th)^{-a} Gamma(a, 2 sqrt(c) cosh th) dth, a = 2s - 2t.
pub fn incomplete_weight(s: f64, t: u32, c: f64) -> f64 {
    let a = 2.0 * s - 2.0 * t as f64;
    let x0 = 2.0 * c.sqrt();
    let f = |th: f64| {
        let ch = th.cosh();
        (2.0 * t as f64 * th).cosh() * (2.0 * ch).powf(-a) * upper_gamma(a, x0 * ch)
    };
    // even analytic integrand: the trapezoid rule converges geometrically
    let h = 0.04;
    let mut sum = 0.5 * f(0.0);
    let mut j = 1;
    loop {
        let v = f(j as f64 * h);
        sum += v;
        if v.abs() <= 1e-18 * sum.abs() || x0 * (j as f64 * h).cosh() > 700.0 {
            break;
        }
        j += 1;
    }
    4.0 * c.powf(-s) * sum * h
}

/// Number of coefficients the smoothed sum needs at split point Y.
pub fn afe_cutoff(series: &RSSeries, split: f64) -> u64 {
    // the weights fall like exp(-2 sqrt(n y / A)); stop near exp(-44)
    let y = split.min(1.0 / split);
    let l = 44.0 + series.kappa();
    (series.conductor * (l / 2.0).powi(2) / y).ceil() as u64
}

/// Lambda(s) = sum_n b_n [Y^s I_s(n Y / A) + w Y^{s - kappa} I_{kappa - s}(n / (A Y))].
/// The split point Y is free when the functional equation holds.
pub fn lambda_completed(series: &RSSeries, s: f64, split: f64) -> Result<Complex64> {
    if split <= 0.0 {
        return Err(Error::Precondition("split point must be positive".into()));
    }
    lambda_truncated(series, s, split, afe_cutoff(series, split))
}

/// The smoothed sum over n <= cutoff only.
pub fn lambda_truncated(series: &RSSeries, s: f64, split: f64, cutoff: u64) -> Result<Complex64> {
    if s <= 2.0 * series.t as f64 || series.kappa() - s <= 2.0 * series.t as f64 {
        return Err(Error::Precondition(format!("s = {s} outside the managed strip")));
    }
    if cutoff > series.upto() {
        return Err(Error::InsufficientCoefficients { needed: cutoff, have: series.upto() });
    }
    let (a, w, kap) = (series.conductor, series.sign as f64, series.kappa());
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=cutoff {
        let b = series.coeffs[n as usize];
        if b.norm() == 0.0 {
            continue;
        }
        let c = n as f64 / a;
        let wt = split.powf(s) * incomplete_weight(s, series.t, c * split)
            + w * split.powf(s - kap) * incomplete_weight(kap - s, series.t, c / split);
        acc += b * wt;
    }
    Ok(acc)
}

/// K_nu(y) = int_0^inf exp(-y cosh th) cosh(nu th) dth.
pub fn bessel_k(nu: u32, y: f64) -> f64 {
    let h = 0.02;
    let f = |th: f64| (-y * th.cosh()).exp() * (nu as f64 * th).cosh();
    let mut sum = 0.5 * f(0.0);
    let mut j = 1;
    loop {
        let v = f(j as f64 * h);
        sum += v;
        if v <= 1e-19 * sum {
            break;
        }
        j += 1;
    }
    sum * h
}

/// d/ds I_s(c) = int_0^inf v phi(c e^v) e^{s v} dv, by direct quadrature.
pub fn weight_derivative(s: f64, t: u32, c: f64) -> Result<f64> {
    let phi = |x: f64| 2.0 * x.powf(-(t as f64)) * bessel_k(2 * t, 2.0 * x.sqrt());
    // beyond vmax the integrand is below exp(-40) of its scale
    let mut vmax = 1.0;
    while 2.0 * (c * f64::exp(vmax)).sqrt() - s * vmax < 45.0 {
        vmax += 0.25;
    }
    tanh_sinh_f64(|v| v * phi(c * v.exp()) * (s * v).exp(), 0.0, vmax, 1e-13)
}

#[derive(Clone, Debug)]
pub struct CentralDerivative {
    /// L'_A(f, chi, k + t).
    pub value: Complex64,
    /// Lambda'(k + t).
    pub lambda_prime: Complex64,
    pub gamma_factor: f64,
    pub terms: u64,
}

/// L'(k+t) from Lambda'(s0) = 2 sum b_n dI_s(n/A)/ds at s0 when w = -1.
pub fn central_derivative(series: &RSSeries) -> Result<CentralDerivative> {
    if series.sign != -1 {
        return Err(Error::Precondition(format!("root number is {}, need -1", series.sign)));
    }
    let s0 = series.center();
    let need = afe_cutoff(series, 1.0);
    if need > series.upto() {
        return Err(Error::InsufficientCoefficients { needed: need, have: series.upto() });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=need {
        let b = series.coeffs[n as usize];
        if b.norm() == 0.0 {
            continue;
        }
        acc += b * (2.0 * weight_derivative(s0, series.t, n as f64 / series.conductor)?);
    }
    let g = series.gamma_factor(s0);
    Ok(CentralDerivative { value: acc / g, lambda_prime: acc, gamma_factor: g, terms: need })
}

/// Functional-equation residual |Lambda(s) - w Lambda(kappa - s)| / |Lambda(s)|, with the
/// two sides evaluated at different split points.
pub fn fe_residual(series: &RSSeries, s: f64) -> Result<f64> {
    fe_residual_truncated(series, s, afe_cutoff(series, 1.25))
}

pub fn fe_residual_truncated(series: &RSSeries, s: f64, cutoff: u64) -> Result<f64> {
    let l = lambda_truncated(series, s, 1.0, cutoff)?;
    let r = lambda_truncated(series, series.kappa() - s, 1.25, cutoff)? * series.sign as f64;
    Ok((l - r).norm() / l.norm().max(f64::MIN_POSITIVE))
}

#[derive(Clone, Copy, Debug)]
pub struct PeterssonReport {
    pub value: f64,
    /// Relative change against the half-size mesh.
    pub mesh_change: f64,
}

fn f_value(f: &Eigenform, x: f64, y: f64, terms: u64) -> Complex64 {
    let q = Complex64::from_polar((-2.0 * PI * y).exp(), 2.0 * PI * x);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qn = q;
    for n in 1..=terms {
        acc += qn * f.a(n) as f64;
        qn *= q;
    }
    acc
}

/// y^{2k} |f(z)|^2.
fn invariant_mass(f: &Eigenform, x: f64, y: f64, terms: u64) -> f64 {
    let k2 = f.weight as i32;
    f_value(f, x, y, terms).norm_sqr() * y.powi(k2)
}

fn q_terms(f: &Eigenform, ymin: f64) -> Result<u64> {
    let r = (-2.0 * PI * ymin).exp();
    let mut n = 1u64;
    while (n as f64).powf(f.weight as f64) * r.powi(n as i32) > 1e-20 {
        n += 1;
    }
    if n > f.len() {
        return Err(Error::InsufficientCoefficients { needed: n, have: f.len() });
    }
    Ok(n)
}

fn simpson_weights(m: usize) -> Vec<f64> {
    (0..=m).map(|i| if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 }).collect()
}

fn petersson_mesh(f: &Eigenform, mesh: usize, terms: u64) -> f64 {
    let n = f.level as f64;
    let ymax = 12.0 * n;
    let mx = 2 * mesh;
    let my = 2 * mesh * (ymax as usize);
    let (wx, wy) = (simpson_weights(mx), simpson_weights(my));
    let hx = 1.0 / mx as f64;
    let mut total = 0.0;
    for (i, wxi) in wx.iter().enumerate() {
        let x = -0.5 + i as f64 * hx;
        let y0 = (1.0 - x * x).sqrt();
        let hy = (ymax - y0) / my as f64;
        let mut col = 0.0;
        for (j, wyj) in wy.iter().enumerate() {
            let y = y0 + j as f64 * hy;
            // Gamma_0(N) \ SL_2(Z) = {1} and S T^j; y^{2k}|f|^2 at S(z + j) equals its value at (z + j)/N
            let mut h = invariant_mass(f, x, y, terms);
            for s in 0..f.level {
                h += invariant_mass(f, (x + s as f64) / n, y / n, terms);
            }
            col += wyj * h / (y * y);
        }
        total += wxi * col * hy / 3.0;
    }
    total * hx / 3.0
}

/// (f, f) = int over Gamma_0(N) \ H of |f|^2 y^{2k} dx dy / y^2, for prime N,
/// by Simpson's rule on the standard domain translated by coset representatives.
pub fn petersson_quadrature(f: &Eigenform, mesh: usize) -> Result<PeterssonReport> {
    if factorize(f.level).iter().any(|&(_, e)| e > 1) || factorize(f.level).len() != 1 {
        return Err(Error::Precondition(format!("Petersson quadrature needs prime level, got {}", f.level)));
    }
    let terms = q_terms(f, 3f64.sqrt() / (2.0 * f.level as f64))?;
    let fine = petersson_mesh(f, mesh, terms);
    let coarse = petersson_mesh(f, mesh / 2, terms);
    let change = (fine - coarse).abs() / fine.abs();
    if !change.is_finite() || change > 1e-3 {
        return Err(Error::Convergence { what: "Petersson quadrature".into(), achieved: change, requested: 1e-3 });
    }
    Ok(PeterssonReport { value: fine, mesh_change: change })
}

