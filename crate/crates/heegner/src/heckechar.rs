//! Unramified Hecke characters of infinity type (2t, 0) and the partial
//! theta coefficients r_{A,chi}(n).

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::quadfield::{Disc, Ideal, KNum};
use crate::special::num::{pi, Complex};

/// An exact element of K when available, otherwise a complex approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgValue {
    Exact(KNum),
    Approx(Complex),
}

impl AlgValue {
    pub fn to_complex(&self, prec: u32) -> Complex {
        match self {
            AlgValue::Exact(k) => k.to_complex(prec),
            AlgValue::Approx(c) => c.with_prec(prec),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AlgValue::Exact(_))
    }

    pub fn exact(&self) -> Option<&KNum> {
        match self {
            AlgValue::Exact(k) => Some(k),
            AlgValue::Approx(_) => None,
        }
    }

    pub fn mul(&self, o: &AlgValue) -> AlgValue {
        match (self, o) {
            (AlgValue::Exact(a), AlgValue::Exact(b)) => AlgValue::Exact(a.mul(b)),
            _ => {
                let p = self.prec().max(o.prec());
                AlgValue::Approx(&self.to_complex(p) * &o.to_complex(p))
            }
        }
    }

    fn prec(&self) -> u32 {
        match self {
            AlgValue::Exact(_) => 64,
            AlgValue::Approx(c) => c.prec(),
        }
    }
}

/// Principal n-th root of a complex number, argument in [0, 2 pi / n).
fn principal_root(z: &Complex, n: u32) -> Complex {
    let p = z.prec();
    let two_pi = pi(p) * 2u32;
    let mut arg = z.arg();
    if arg < 0 {
        arg += &two_pi;
    }
    let r = z.abs().root(n);
    Complex::cis(&(arg / n)).scale(&r)
}

#[derive(Clone, Debug)]
pub struct HeckeChar {
    pub disc: Disc,
    pub t: u32,
    pub branch: usize,
    pub prec: u32,
    /// alpha_i with R_{g_i}^{n_i} = (alpha_i), per class-group generator.
    pub gen_alpha: Vec<KNum>,
    /// chi on the reduced ideal of each class.
    pub class_values: Vec<AlgValue>,
}

impl HeckeChar {
    pub fn new(disc: &Disc, t: u32, branch: usize, prec: u32) -> Result<Self> {
        if disc.d == -3 && t % 3 != 0 {
            return Err(Error::UnitInvariance { d: disc.d, t });
        }
        let h = disc.h();
        if branch >= h {
            return Err(Error::BranchOutOfRange { branch, max: h });
        }
        let cg = &disc.cg;
        let e = 2 * t;
        let mut gen_alpha = Vec::new();
        let mut gen_values = Vec::new();
        let mut radix = 1usize;
        for &(g, n) in &cg.gens {
            let (alpha, cls) = power_of_class_ideal(disc, &[(g, n)]);
            debug_assert_eq!(cls, 0);
            let b = (branch / radix) % n as usize;
            radix *= n as usize;
            let target = alpha.pow(e).to_complex(prec + 32);
            let zeta = Complex::cis(&(pi(prec + 32) * 2u32 * b as u32 / n));
            gen_values.push(&principal_root(&target, n) * &zeta);
            gen_alpha.push(alpha);
        }
        let mut class_values = Vec::with_capacity(h);
        for c in 0..h {
            let exps = &cg.dlog[c];
            let terms: Vec<(usize, u32)> = cg.gens.iter().zip(exps).map(|(&(g, _), &x)| (g, x)).collect();
            let (mu, cls) = power_of_class_ideal(disc, &terms);
            debug_assert_eq!(cls, c);
            let inv = mu.pow(e).inv();
            if h == 1 {
                class_values.push(AlgValue::Exact(inv));
            } else {
                let mut v = inv.to_complex(prec + 32);
                for (gv, &x) in gen_values.iter().zip(exps) {
                    v = &v * &gv.powu(x);
                }
                class_values.push(AlgValue::Approx(v.with_prec(prec)));
            }
        }
        Ok(HeckeChar { disc: disc.clone(), t, branch, prec, gen_alpha, class_values })
    }

    /// chi(a) for an integral ideal.
    pub fn eval(&self, a: &Ideal) -> AlgValue {
        let (lambda, cls) = self.disc.decompose(a);
        AlgValue::Exact(lambda.pow(2 * self.t)).mul(&self.class_values[cls])
    }

    pub fn class_ideal_value(&self, cls: usize) -> &AlgValue {
        &self.class_values[cls]
    }

    pub fn n_branches(&self) -> usize {
        self.disc.h()
    }
}

/// prod R_{g}^{e} = mu * R_C, tracking mu exactly while keeping ideals reduced.
fn power_of_class_ideal(disc: &Disc, terms: &[(usize, u32)]) -> (KNum, usize) {
    let mut mu = KNum::one(disc.d);
    let mut cur = Ideal::unit(disc.d);
    for &(g, e) in terms {
        let r = disc.class_ideal(g);
        for _ in 0..e {
            let (l, c) = disc.decompose(&cur.mul(&r));
            mu = mu.mul(&l);
            cur = disc.class_ideal(c);
        }
    }
    let (l, c) = disc.decompose(&cur);
    (mu.mul(&l), c)
}

/// Exact partial theta sums for one class: r(n) = factor * (X_n + Y_n sqrt D).
#[derive(Clone, Debug)]
pub struct ThetaTable {
    pub d: i64,
    pub t: u32,
    pub cls: usize,
    /// chi(a) / (2u (2a)^{2t}) for the class ideal a = <a, (-b + sqrt D)/2>.
    pub factor: AlgValue,
    sums: Vec<(i128, i128)>,
}

impl ThetaTable {
    pub fn new(chi: &HeckeChar, cls: usize, upto: u64) -> Result<Self> {
        let disc = &chi.disc;
        let d = disc.d;
        let f = disc.cg.forms[cls];
        let (a, b, c) = (f.a as i128, f.b as i128, f.c as i128);
        let e = 2 * chi.t;
        let mut sums = vec![(0i128, 0i128); upto as usize + 1];
        let m = upto as i128;
        // a u^2 - b u v + c v^2 <= m
        let vmax = isqrt(4 * a * m / (-d as i128)) + 1;
        for v in -vmax..=vmax {
            let disc_v = 4 * a * m + d as i128 * v * v;
            if disc_v < 0 {
                continue;
            }
            let s = isqrt(disc_v);
            let lo = (b * v - s).div_euclid(2 * a) - 1;
            let hi = (b * v + s).div_euclid(2 * a) + 1;
            for u in lo..=hi {
                let n = a * u * u - b * u * v + c * v * v;
                if n < 1 || n > m {
                    continue;
                }
                let (x, y) = pow_int(d as i128, 2 * a * u - b * v, -v, e).ok_or_else(overflow)?;
                let slot = &mut sums[n as usize];
                slot.0 = slot.0.checked_add(x).ok_or_else(overflow)?;
                slot.1 = slot.1.checked_add(y).ok_or_else(overflow)?;
            }
        }
        let den = Integer::from(2 * disc.u) * Integer::from(2 * f.a).pow(e);
        let factor = AlgValue::Exact(KNum::new(d, Rational::from((1, den)), Rational::new())).mul(chi.class_ideal_value(cls));
        Ok(ThetaTable { d, t: chi.t, cls, factor, sums })
    }

    pub fn upto(&self) -> u64 {
        self.sums.len() as u64 - 1
    }

    pub fn raw(&self, n: u64) -> (i128, i128) {
        self.sums[n as usize]
    }

    pub fn is_zero(&self, n: u64) -> bool {
        n == 0 || self.sums[n as usize] == (0, 0)
    }

    /// r_{A,chi}(n); zero at n = 0 (cusp form).
    pub fn r(&self, n: u64) -> AlgValue {
        let (x, y) = if n == 0 { (0, 0) } else { self.sums[n as usize] };
        let v = KNum::new(self.d, Rational::from(Integer::from(x)), Rational::from(Integer::from(y)));
        AlgValue::Exact(v).mul(&self.factor)
    }

    pub fn r_complex(&self, n: u64, prec: u32) -> Complex {
        if self.is_zero(n) {
            return Complex::zero(prec);
        }
        let (x, y) = self.sums[n as usize];
        let s = Float::with_val(prec, -self.d).sqrt();
        let v = Complex::new(Float::with_val(prec, x), Float::with_val(prec, y) * s);
        &v * &self.factor.to_complex(prec)
    }

    /// Real part at working precision; exact rational when the table is exact and real.
    pub fn r_real(&self, n: u64, prec: u32) -> Float {
        self.r_complex(n, prec).re
    }

    /// r(n) as an exact rational, when it is one.
    pub fn r_rational(&self, n: u64) -> Option<Rational> {
        match self.r(n) {
            AlgValue::Exact(k) if k.y == 0 => Some(k.x),
            _ => None,
        }
    }
}

fn overflow() -> Error {
    Error::Domain("theta sum overflows i128; lower the table size or t".into())
}

fn isqrt(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// (p + q sqrt D)^e with checked arithmetic.
fn pow_int(d: i128, p: i128, q: i128, e: u32) -> Option<(i128, i128)> {
    let (mut x, mut y) = (1i128, 0i128);
    for _ in 0..e {
        let nx = x.checked_mul(p)?.checked_add(y.checked_mul(q)?.checked_mul(d)?)?;
        let ny = x.checked_mul(q)?.checked_add(y.checked_mul(p)?)?;
        x = nx;
        y = ny;
    }
    Some((x, y))
}

/// Tables for every class.
pub fn theta_tables(chi: &HeckeChar, upto: u64) -> Result<Vec<ThetaTable>> {
    (0..chi.disc.h()).map(|c| ThetaTable::new(chi, c, upto)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d11_values() {
        let k = Disc::new(-11).unwrap();
        let chi = HeckeChar::new(&k, 1, 0, 128).unwrap();
        let tab = ThetaTable::new(&chi, 0, 7).unwrap();
        let r: Vec<Rational> = (1..=7).map(|n| tab.r_rational(n).unwrap()).collect();
        assert_eq!(r, [1, 0, -5, 4, -1, 0, 0].map(Rational::from).to_vec());
    }

    #[test]
    fn guards() {
        let k = Disc::new(-3).unwrap();
        assert!(HeckeChar::new(&k, 1, 0, 128).is_err());
        assert!(HeckeChar::new(&k, 3, 0, 128).is_ok());
        let k = Disc::new(-23).unwrap();
        assert!(HeckeChar::new(&k, 1, 3, 128).is_err());
    }
}
