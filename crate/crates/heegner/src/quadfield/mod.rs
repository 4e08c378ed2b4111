//! Imaginary quadratic fields of odd discriminant: Kronecker symbols, class
//! groups, ideals, Heegner points and genus characters.

pub mod forms;
pub mod ideal;
pub mod knum;
pub mod kronecker;

use std::fmt;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

pub use forms::{reduced_forms, ClassGroup, Form};
pub use ideal::Ideal;
pub use knum::KNum;
pub use kronecker::{divisors, factorize, gcd, kronecker};

use crate::error::{Error, Result};
use crate::special::num::Complex;

/// A negative odd fundamental discriminant together with its class group.
#[derive(Clone, Debug)]
pub struct Disc {
    pub d: i64,
    pub u: u32,
    pub cg: ClassGroup,
}

impl Disc {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 || d.rem_euclid(4) != 1 {
            return Err(Error::Domain(format!("D = {d} is not a negative odd discriminant")));
        }
        if !kronecker::is_squarefree(d.unsigned_abs()) {
            return Err(Error::Domain(format!("D = {d} is not fundamental")));
        }
        let u = if d == -3 { 3 } else { 1 };
        Ok(Disc { d, u, cg: ClassGroup::new(d) })
    }

    pub fn h(&self) -> usize {
        self.cg.h()
    }

    /// Number of units, 2u.
    pub fn w(&self) -> u32 {
        2 * self.u
    }

    pub fn eps(&self, n: i64) -> i32 {
        kronecker(self.d, n)
    }

    pub fn class_of(&self, a: &Ideal) -> usize {
        self.cg.index_of(&a.to_form())
    }

    /// The reduced ideal <a, (-b + sqrt D)/2> standing for a class.
    pub fn class_ideal(&self, cls: usize) -> Ideal {
        Ideal::from_form(&self.cg.forms[cls])
    }

    /// Conjugate (= inverse) class.
    pub fn conj_class(&self, cls: usize) -> usize {
        self.cg.inverse[cls]
    }

    /// Write a = lambda * R with R the reduced ideal of the class of a.
    pub fn decompose(&self, a: &Ideal) -> (KNum, usize) {
        let cls = self.class_of(a);
        let r = self.class_ideal(cls);
        let g = a.mul(&r.conj()).principal_generator().expect("a * conj(R) is principal");
        let lambda = g.scale(&Rational::from((1, r.norm())));
        (lambda, cls)
    }

    /// All prime ideals above p, conjugates adjacent.
    pub fn primes_above(&self, p: u64) -> Vec<Ideal> {
        let d = self.d;
        let pi = p as i64;
        match kronecker(d, pi) {
            0 => vec![Ideal::new(d, 1, pi, pi)],
            1 => {
                let b = (0..2 * pi)
                    .find(|&b| (b - d).rem_euclid(2) == 0 && (b as i128 * b as i128 - d as i128).rem_euclid(4 * pi as i128) == 0)
                    .expect("split prime has a square root of D");
                let q = Ideal::new(d, 1, pi, b);
                vec![q, q.conj()]
            }
            _ => vec![Ideal::new(d, pi, 1, 1)],
        }
    }

    /// All integral ideals of norm n with their classes.
    pub fn ideals_of_norm(&self, n: u64) -> Vec<(Ideal, usize)> {
        let mut acc = vec![Ideal::unit(self.d)];
        for (p, e) in factorize(n) {
            let pr = self.primes_above(p);
            let mut local = Vec::new();
            match kronecker(self.d, p as i64) {
                1 => {
                    for i in 0..=e {
                        local.push(pr[0].pow(i).mul(&pr[1].pow(e - i)));
                    }
                }
                0 => local.push(pr[0].pow(e)),
                _ => {
                    if e % 2 == 0 {
                        local.push(pr[0].pow(e / 2));
                    }
                }
            }
            let mut next = Vec::new();
            for a in &acc {
                for l in &local {
                    next.push(a.mul(l));
                }
            }
            acc = next;
        }
        acc.into_iter().map(|a| (a, self.class_of(&a))).collect()
    }

    /// Coprime factorisations D = D1 * D2 into fundamental discriminants.
    pub fn splittings(&self) -> Vec<(i64, i64)> {
        let primes: Vec<i64> = factorize(self.d.unsigned_abs())
            .into_iter()
            .map(|(p, _)| {
                let p = p as i64;
                if p % 4 == 1 {
                    p
                } else {
                    -p
                }
            })
            .collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << primes.len()) {
            let d1: i64 = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).product();
            out.push((d1, self.d / d1));
        }
        out
    }

    /// D2 = product of p* over primes p | gcd(m, D).
    pub fn d2_of(&self, m: u64) -> i64 {
        factorize(self.d.unsigned_abs())
            .into_iter()
            .filter(|(p, _)| m % p == 0)
            .map(|(p, _)| if p % 4 == 1 { p as i64 } else { -(p as i64) })
            .product()
    }

    /// The genus character chi_{D1.D2} on a class.
    pub fn genus_character(&self, d1: i64, d2: i64, cls: usize) -> Result<i32> {
        if d1.checked_mul(d2) != Some(self.d) || gcd(d1, d2) != 1 || d1.rem_euclid(4) != 1 || d2.rem_euclid(4) != 1 {
            return Err(Error::InvalidSplitting { d1, d2 });
        }
        let f = self.cg.forms[cls];
        for r in 1i64.. {
            for x in -r..=r {
                for y in [-r, r] {
                    for (x, y) in [(x, y), (y, x)] {
                        if gcd(x, y) != 1 {
                            continue;
                        }
                        let m = f.eval(x, y);
                        if gcd(m, d1) == 1 {
                            return Ok(kronecker(d1, m));
                        }
                        if gcd(m, d2) == 1 {
                            return Ok(kronecker(d2, m));
                        }
                    }
                }
            }
        }
        unreachable!()
    }

    pub fn heegner_point(&self, n: i64, beta: i64, cls: usize) -> Result<HeegnerPoint> {
        if n < 1 {
            return Err(Error::Domain("level must be positive".into()));
        }
        let beta = beta.rem_euclid(2 * n);
        if (beta as i128 * beta as i128 - self.d as i128).rem_euclid(4 * n as i128) != 0 {
            return Err(Error::NoSolution(format!("beta^2 = {} is not D = {} mod 4N = {}", beta * beta, self.d, 4 * n)));
        }
        for j in 1..=100_000i64 {
            let a = n * j;
            let mut b = beta;
            while b < 2 * a {
                let num = b as i128 * b as i128 - self.d as i128;
                if num % (4 * a as i128) == 0 {
                    let c = (num / (4 * a as i128)) as i64;
                    let id = Ideal::new(self.d, 1, a, b);
                    if self.class_of(&id) == cls && gcd(gcd(a, b), c) == 1 {
                        return Ok(HeegnerPoint { d: self.d, level: n, beta, a, b, c, cls });
                    }
                }
                b += 2 * n;
            }
        }
        Err(Error::NoSolution(format!("no Heegner point found for class {cls}")))
    }

    /// One Heegner point per class, in class order.
    pub fn heegner_points(&self, n: i64, beta: i64) -> Result<Vec<HeegnerPoint>> {
        (0..self.h()).map(|c| self.heegner_point(n, beta, c)).collect()
    }
}

/// A root tau = (-B + sqrt D)/(2A) of A X^2 + B X + C with N | A, B = beta mod 2N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeegnerPoint {
    pub d: i64,
    pub level: i64,
    pub beta: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    /// Class of the ideal <A, (B + sqrt D)/2>.
    pub cls: usize,
}

impl HeegnerPoint {
    pub fn tau(&self, prec: u32) -> Complex {
        let s = Float::with_val(prec, -self.d).sqrt();
        let den = Float::with_val(prec, 2 * self.a);
        Complex::new(Float::with_val(prec, -self.b) / &den, s / den)
    }

    pub fn tau_exact(&self) -> KNum {
        KNum::new(self.d, Rational::from((-self.b, 2 * self.a)), Rational::from((1, 2 * self.a)))
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(self.d, 1, self.a, self.b)
    }
}

impl fmt::Display for HeegnerPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}
