//! Multiprecision scalars. Real numbers are `rug::Float`; complex numbers are
//! a pair of them, since the system MPFR is used without MPC.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

pub const DEFAULT_PREC: u32 = 128;
pub const MIN_PREC: u32 = 64;

pub fn real(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

pub fn from_int(prec: u32, v: i64) -> Float {
    Float::with_val(prec, v)
}

pub fn from_rational(prec: u32, q: &Rational) -> Float {
    Float::with_val(prec, q)
}

pub fn from_integer(prec: u32, v: &Integer) -> Float {
    Float::with_val(prec, v)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn euler_gamma(prec: u32) -> Float {
    Float::with_val(prec, Constant::Euler)
}

pub fn ln_u64(prec: u32, n: u64) -> Float {
    Float::with_val(prec, n).ln()
}

/// Parse a decimal string at the given precision.
pub fn parse_real(prec: u32, s: &str) -> Option<Float> {
    Float::parse(s).ok().map(|p| Float::with_val(prec, p))
}

/// Decimal rendering with enough digits to round-trip at `prec` bits.
pub fn to_decimal(x: &Float) -> String {
    let digits = (x.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    x.to_string_radix(10, Some(digits))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Complex::new(Float::with_val(prec, 1), Float::new(prec))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Complex::new(real(prec, re), real(prec, im))
    }

    pub fn from_real(re: Float) -> Self {
        let p = re.prec();
        Complex::new(re, Float::new(p))
    }

    pub fn i(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Complex::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    /// |z|^2
    pub fn norm(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re * s), Float::with_val(p, &self.im * s))
    }

    pub fn mul_i(&self) -> Self {
        Complex::new(-self.im.clone(), self.re.clone())
    }

    pub fn recip(&self) -> Self {
        let n = self.norm();
        Complex::new(Float::with_val(self.prec(), &self.re / &n), -Float::with_val(self.prec(), &self.im / &n))
    }

    pub fn div(&self, other: &Complex) -> Self {
        self * &other.recip()
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Complex::new(Float::with_val(p, &r * &c), Float::with_val(p, &r * &s))
    }

    pub fn ln(&self) -> Self {
        let p = self.prec();
        Complex::new(self.abs().ln(), Float::with_val(p, self.arg()))
    }

    pub fn powu(&self, e: u32) -> Self {
        let mut acc = Complex::one(self.prec());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Self {
        if e >= 0 {
            self.powu(e as u32)
        } else {
            self.powu((-e) as u32).recip()
        }
    }

    /// e^{i theta}
    pub fn cis(theta: &Float) -> Self {
        let p = theta.prec();
        let (s, c) = theta.clone().sin_cos(Float::new(p));
        Complex::new(c, s)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        if im == 0.0 {
            write!(f, "{re:.17e}")
        } else {
            write!(f, "{re:.17e}{im:+.17e}i")
        }
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re + &o.re), Float::with_val(p, &self.im + &o.im))
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re - &o.re), Float::with_val(p, &self.im - &o.im))
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        let p = self.prec();
        let rr = Float::with_val(p, &self.re * &o.re);
        let ii = Float::with_val(p, &self.im * &o.im);
        let ri = Float::with_val(p, &self.re * &o.im);
        let ir = Float::with_val(p, &self.im * &o.re);
        Complex::new(rr - ii, ri + ir)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re.clone(), -self.im.clone())
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, o: Complex) -> Complex {
        &self + &o
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, o: Complex) -> Complex {
        &self - &o
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, o: Complex) -> Complex {
        &self * &o
    }
}

/// Whether a reported tail bound is a proof or an empirical envelope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailKind {
    Exact,
    Heuristic,
}

/// A numerical result with the parameters that produced it.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: Complex,
    pub prec: u32,
    /// Truncation radius (terms, shells) used; 0 for finite computations.
    pub truncation: u64,
    /// Estimated absolute size of the neglected tail.
    pub tail: f64,
    pub tail_kind: TailKind,
}

impl Evaluation {
    pub fn exact(value: Complex) -> Self {
        let prec = value.prec();
        Evaluation { value, prec, truncation: 0, tail: 0.0, tail_kind: TailKind::Exact }
    }

    pub fn real(&self) -> &Float {
        &self.value.re
    }

    pub fn add(&self, o: &Evaluation) -> Evaluation {
        Evaluation {
            value: &self.value + &o.value,
            prec: self.prec.min(o.prec),
            truncation: self.truncation.max(o.truncation),
            tail: self.tail + o.tail,
            tail_kind: if self.tail_kind == TailKind::Exact && o.tail_kind == TailKind::Exact {
                TailKind::Exact
            } else {
                TailKind::Heuristic
            },
        }
    }

    pub fn scale(&self, s: &Float) -> Evaluation {
        let a = s.to_f64().abs();
        Evaluation { value: self.value.scale(s), tail: self.tail * a, ..self.clone() }
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

pub fn factorial(n: u64) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

pub fn pow_rational(q: &Rational, e: u32) -> Rational {
    Rational::from(q.pow(e))
}
