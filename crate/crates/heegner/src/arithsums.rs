//! Genus-character divisor sums sigma_A(n), sigma'_A(n) and the weights
//! eps_A(n, d) they are built from.

use std::collections::BTreeMap;
use std::fmt;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quadfield::{divisors, factorize, gcd, kronecker, Disc};

/// Sign s in eps_{D2}(s N n / d).
///
/// The P-sum (sigma') uses s = -1. The Q-sum of the archimedean part pairs
/// sigma(n) with r(m|D| + nN), i.e. the same weight evaluated at -n, which
/// gives s = +1 there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignConvention {
    Minus,
    Plus,
}

impl SignConvention {
    fn value(self) -> i64 {
        match self {
            SignConvention::Minus => -1,
            SignConvention::Plus => 1,
        }
    }
}

/// Integer or rational combination of logarithms of primes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimeLogs {
    pub coeffs: BTreeMap<u64, Rational>,
}

impl PrimeLogs {
    pub fn zero() -> Self {
        Self::default()
    }

    /// c * log(n) for a positive rational n.
    pub fn log_of(n: &Rational, c: &Rational) -> Self {
        let mut out = Self::zero();
        let num = n.numer().to_u64().expect("small numerator");
        let den = n.denom().to_u64().expect("small denominator");
        for (p, e) in factorize(num) {
            out.add_term(p, &Rational::from(c * e));
        }
        for (p, e) in factorize(den) {
            out.add_term(p, &(-Rational::from(c * e)));
        }
        out
    }

    pub fn add_term(&mut self, p: u64, c: &Rational) {
        let slot = self.coeffs.entry(p).or_default();
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(&p);
        }
    }

    pub fn add(&mut self, o: &PrimeLogs) {
        for (p, c) in &o.coeffs {
            self.add_term(*p, c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> PrimeLogs {
        let mut out = PrimeLogs::zero();
        for (p, x) in &self.coeffs {
            out.add_term(*p, &Rational::from(x * c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Integer coefficients, if all are integral.
    pub fn integer_coeffs(&self) -> Option<BTreeMap<u64, i64>> {
        self.coeffs
            .iter()
            .map(|(p, c)| if *c.denom() == 1 { c.numer().to_i64().map(|v| (*p, v)) } else { None })
            .collect()
    }

    pub fn eval(&self, prec: u32) -> Float {
        let mut s = Float::new(prec);
        for (p, c) in &self.coeffs {
            s += Float::with_val(prec, *p).ln() * c;
        }
        s
    }
}

impl fmt::Display for PrimeLogs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.coeffs.iter().enumerate() {
            match (i, c.cmp0()) {
                (0, _) => write!(f, "{c}*log({p})")?,
                (_, std::cmp::Ordering::Less) => write!(f, " - {}*log({p})", Rational::from(-c))?,
                _ => write!(f, " + {c}*log({p})")?,
            }
        }
        Ok(())
    }
}

/// Per-divisor-of-|D| data: |D2| = g, the splitting, and chi_{D1.D2}(A).
#[derive(Clone, Debug)]
struct Split {
    g: u64,
    d1: i64,
    d2: i64,
    chi: i32,
}

#[derive(Clone, Debug)]
pub struct SigmaContext {
    pub disc: Disc,
    pub level: i64,
    pub beta: i64,
    pub cls: usize,
    /// Convention used by [`SigmaContext::sigma`].
    pub sigma_sign: SignConvention,
    /// Convention used by [`SigmaContext::sigma_prime`].
    pub sigma_prime_sign: SignConvention,
    splits: Vec<Split>,
}

impl SigmaContext {
    pub fn new(disc: &Disc, level: i64, beta: i64, cls: usize) -> Result<Self> {
        let mut splits = Vec::new();
        for (d1, d2) in disc.splittings() {
            let chi = disc.genus_character(d1, d2, cls)?;
            splits.push(Split { g: d2.unsigned_abs(), d1, d2, chi });
        }
        Ok(SigmaContext {
            disc: disc.clone(),
            level,
            beta,
            cls,
            sigma_sign: SignConvention::Plus,
            sigma_prime_sign: SignConvention::Minus,
            splits,
        })
    }

    pub fn with_signs(mut self, sigma: SignConvention, sigma_prime: SignConvention) -> Self {
        self.sigma_sign = sigma;
        self.sigma_prime_sign = sigma_prime;
        self
    }

    fn split(&self, g: u64) -> &Split {
        self.splits.iter().find(|s| s.g == g).expect("every divisor of |D| is a splitting")
    }

    /// eps_A(n, d) with the sign convention s.
    pub fn eps_signed(&self, n: u64, d: u64, s: SignConvention) -> i32 {
        debug_assert!(d > 0 && n % d == 0);
        let dd = self.disc.d.unsigned_abs();
        let e = n / d;
        let g = gcd(d as i64, dd as i64) as u64;
        if gcd(g as i64, e as i64) != 1 {
            return 0;
        }
        let sp = self.split(g);
        let arg = s.value() as i128 * self.level as i128 * e as i128;
        let x = kronecker(sp.d1, d as i64) * kronecker_wide(sp.d2, arg);
        x * sp.chi
    }

    /// eps_A(n, d) exactly as in the divisor-sum definition, eps_{D2}(-N n / d).
    pub fn eps(&self, n: u64, d: u64) -> i32 {
        self.eps_signed(n, d, SignConvention::Minus)
    }

    pub fn sigma(&self, n: u64) -> i64 {
        divisors(n).iter().map(|&d| self.eps_signed(n, d, self.sigma_sign) as i64).sum()
    }

    /// sigma'_A(n) as a combination of prime logarithms.
    pub fn sigma_prime(&self, n: u64) -> PrimeLogs {
        let mut out = PrimeLogs::zero();
        for d in divisors(n) {
            let e = self.eps_signed(n, d, self.sigma_prime_sign);
            if e == 0 {
                continue;
            }
            out.add(&PrimeLogs::log_of(&Rational::from((n, d * d)), &Rational::from(e)));
        }
        out
    }

    pub fn sigma_prime_value(&self, n: u64, prec: u32) -> Float {
        self.sigma_prime(n).eval(prec)
    }

    /// sigma(1..=upto) by a divisor sieve; index 0 is unused.
    pub fn sigma_table(&self, upto: u64) -> Vec<i64> {
        let dd = self.disc.d.unsigned_abs();
        let s = self.sigma_sign.value() as i128 * self.level as i128;
        let mut out = vec![0i64; upto as usize + 1];
        for d in 1..=upto {
            let g = gcd(d as i64, dd as i64) as u64;
            let sp = self.split(g);
            let a = kronecker(sp.d1, d as i64) * sp.chi;
            if a == 0 {
                continue;
            }
            let mut n = d;
            let mut e = 1u64;
            while n <= upto {
                if g == 1 || gcd(g as i64, e as i64) == 1 {
                    let b = if sp.d2 == 1 { 1 } else { kronecker_wide(sp.d2, s * e as i128) };
                    out[n as usize] += (a * b) as i64;
                }
                n += d;
                e += 1;
            }
        }
        out
    }
}

fn kronecker_wide(d: i64, x: i128) -> i32 {
    // (d / x) only depends on |x| mod |d| and the sign of x for fundamental d
    let m = d.unsigned_abs() as i128;
    let r = (x.abs() % m) as i64;
    let base = kronecker(d, if r == 0 { m as i64 } else { r });
    if x < 0 && d < 0 {
        -base
    } else {
        base
    }
}
