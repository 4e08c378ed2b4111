//! Exact elements x + y sqrt(D) of an imaginary quadratic field.

use std::fmt;

use rug::{Float, Rational};

use crate::special::num::Complex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KNum {
    pub d: i64,
    pub x: Rational,
    pub y: Rational,
}

impl KNum {
    pub fn new(d: i64, x: Rational, y: Rational) -> Self {
        KNum { d, x, y }
    }

    pub fn zero(d: i64) -> Self {
        KNum::new(d, Rational::new(), Rational::new())
    }

    pub fn one(d: i64) -> Self {
        KNum::new(d, Rational::from(1), Rational::new())
    }

    pub fn from_int(d: i64, n: i64) -> Self {
        KNum::new(d, Rational::from(n), Rational::new())
    }

    /// (p + q sqrt(D)) / 2
    pub fn half(d: i64, p: i128, q: i128) -> Self {
        KNum::new(d, Rational::from((p, 2)), Rational::from((q, 2)))
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn conj(&self) -> Self {
        KNum::new(self.d, self.x.clone(), Rational::from(-&self.y))
    }

    pub fn norm(&self) -> Rational {
        Rational::from(self.x.square_ref()) - Rational::from(self.y.square_ref()) * self.d
    }

    pub fn trace(&self) -> Rational {
        Rational::from(&self.x * 2u32)
    }

    pub fn add(&self, o: &KNum) -> KNum {
        KNum::new(self.d, Rational::from(&self.x + &o.x), Rational::from(&self.y + &o.y))
    }

    pub fn sub(&self, o: &KNum) -> KNum {
        KNum::new(self.d, Rational::from(&self.x - &o.x), Rational::from(&self.y - &o.y))
    }

    pub fn mul(&self, o: &KNum) -> KNum {
        let x = Rational::from(&self.x * &o.x) + Rational::from(&self.y * &o.y) * self.d;
        let y = Rational::from(&self.x * &o.y) + Rational::from(&self.y * &o.x);
        KNum::new(self.d, x, y)
    }

    pub fn scale(&self, s: &Rational) -> KNum {
        KNum::new(self.d, Rational::from(&self.x * s), Rational::from(&self.y * s))
    }

    pub fn inv(&self) -> KNum {
        let n = self.norm();
        assert!(n != 0, "inverse of zero");
        self.conj().scale(&Rational::from(n.recip_ref()))
    }

    pub fn div(&self, o: &KNum) -> KNum {
        self.mul(&o.inv())
    }

    pub fn pow(&self, e: u32) -> KNum {
        let mut acc = KNum::one(self.d);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Membership in O_K: 2x, 2y integers of equal parity (D = 1 mod 4).
    pub fn is_integral(&self) -> bool {
        let p = Rational::from(&self.x * 2u32);
        let q = Rational::from(&self.y * 2u32);
        if *p.denom() != 1 || *q.denom() != 1 {
            return false;
        }
        let s = Rational::from(&p + &q);
        s.numer().is_even()
    }

    /// (2x, 2y) as integers, when integral.
    pub fn half_coords(&self) -> Option<(i128, i128)> {
        if !self.is_integral() {
            return None;
        }
        let p = Rational::from(&self.x * 2u32);
        let q = Rational::from(&self.y * 2u32);
        Some((p.numer().to_i128()?, q.numer().to_i128()?))
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        let s = Float::with_val(prec, -self.d).sqrt();
        Complex::new(Float::with_val(prec, &self.x), Float::with_val(prec, &self.y) * s)
    }
}

impl fmt::Display for KNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y == 0 {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{} + ({})*sqrt({})", self.x, self.y, self.d)
        }
    }
}
