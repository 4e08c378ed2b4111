//! Ideals of O_K in the normal form c * <a, (b + sqrt D)/2>.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::forms::Form;
use super::knum::KNum;
use super::kronecker::xgcd;

/// c * <a, (b + sqrt D)/2> with 0 <= b < 2a and b^2 = D mod 4a.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ideal {
    pub d: i64,
    pub content: i64,
    pub a: i64,
    pub b: i64,
}

impl Ideal {
    pub fn new(d: i64, content: i64, a: i64, b: i64) -> Self {
        assert!(a > 0 && content > 0, "ideal needs a, c > 0");
        let b = b.rem_euclid(2 * a);
        debug_assert_eq!((b as i128 * b as i128 - d as i128).rem_euclid(4 * a as i128), 0, "b^2 != D mod 4a");
        Ideal { d, content, a, b }
    }

    pub fn unit(d: i64) -> Self {
        Ideal::new(d, 1, 1, 1)
    }

    /// The ideal of a reduced form (a, b, c): <a, (-b + sqrt D)/2>.
    pub fn from_form(f: &Form) -> Self {
        Ideal::new(f.disc(), 1, f.a, -f.b)
    }

    /// The form (a, -b, (b^2 - D)/4a); its class is the class of the ideal.
    pub fn to_form(&self) -> Form {
        let b = self.b as i128;
        let c = (b * b - self.d as i128) / (4 * self.a as i128);
        Form::new(self.a, -self.b, c as i64)
    }

    pub fn norm(&self) -> i128 {
        self.content as i128 * self.content as i128 * self.a as i128
    }

    pub fn conj(&self) -> Ideal {
        Ideal::new(self.d, self.content, self.a, -self.b)
    }

    /// Z-basis as half-coordinates (p, q) of (p + q sqrt D)/2.
    pub fn basis(&self) -> [(i128, i128); 2] {
        let c = self.content as i128;
        [(2 * c * self.a as i128, 0), (c * self.b as i128, c)]
    }

    pub fn contains(&self, x: &KNum) -> bool {
        let Some((p, q)) = x.half_coords() else {
            return false;
        };
        let c = self.content as i128;
        // x = c (u a + v (b + sqrt D)/2): q = c v, p = c (2 u a + v b)
        if q % c != 0 {
            return false;
        }
        let v = q / c;
        let rest = p - c * v * self.b as i128;
        rest % (2 * c * self.a as i128) == 0
    }

    /// Product by the composition formula.
    pub fn mul(&self, o: &Ideal) -> Ideal {
        assert_eq!(self.d, o.d);
        let d = self.d as i128;
        let (a1, b1, a2, b2) = (self.a as i128, self.b as i128, o.a as i128, o.b as i128);
        let s = (b1 + b2) / 2;
        let (g1, x1, y1) = xgcd(a1, a2);
        let (e, x2, z) = xgcd(g1, s);
        let (x, y) = (x1 * x2, y1 * x2);
        let a3 = a1 * a2 / (e * e);
        let num = x * a1 * b2 + y * a2 * b1 + z * (b1 * b2 + d) / 2;
        let b3 = (num / e).rem_euclid(2 * a3);
        let content = self.content as i128 * o.content as i128 * e;
        Ideal::new(self.d, content as i64, a3 as i64, b3 as i64)
    }

    pub fn pow(&self, e: u32) -> Ideal {
        let mut acc = Ideal::unit(self.d);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Canonical Hermite form in the basis (1, omega), omega = (1 + sqrt D)/2.
    pub fn hnf(&self) -> (i128, i128, i128) {
        hnf(&self.basis())
    }

    /// A generator when the ideal is principal. The shortest non-zero vector
    /// has norm N(I) exactly when I = (x).
    pub fn principal_generator(&self) -> Option<KNum> {
        let (v1, _) = lagrange_reduce(self.d, self.basis());
        if half_norm4(self.d, v1) == 4 * self.norm() {
            Some(KNum::half(self.d, v1.0, v1.1))
        } else {
            None
        }
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.content != 1 {
            write!(f, "{}*", self.content)?;
        }
        write!(f, "<{}, ({}+sqrt({}))/2>", self.a, self.b, self.d)
    }
}

/// 4 N(x) for x = (p + q sqrt D)/2.
pub fn half_norm4(d: i64, v: (i128, i128)) -> i128 {
    v.0 * v.0 - d as i128 * v.1 * v.1
}

fn half_dot4(d: i64, v: (i128, i128), w: (i128, i128)) -> i128 {
    v.0 * w.0 - d as i128 * v.1 * w.1
}

fn round_div(x: i128, y: i128) -> i128 {
    (2 * x + y).div_euclid(2 * y)
}

/// Lagrange-Gauss reduction of a rank-two lattice under the norm form.
pub fn lagrange_reduce(d: i64, b: [(i128, i128); 2]) -> ((i128, i128), (i128, i128)) {
    let (mut v1, mut v2) = (b[0], b[1]);
    loop {
        if half_norm4(d, v2) < half_norm4(d, v1) {
            std::mem::swap(&mut v1, &mut v2);
        }
        let mu = round_div(half_dot4(d, v1, v2), half_norm4(d, v1));
        if mu == 0 {
            break;
        }
        v2 = (v2.0 - mu * v1.0, v2.1 - mu * v1.1);
        if half_norm4(d, v2) >= half_norm4(d, v1) {
            break;
        }
    }
    (v1, v2)
}

/// Hermite normal form (A, B, C) of the Z-module spanned by half-coordinate
/// vectors: the module is Z A + Z (B + C omega) with 0 <= B < A.
pub fn hnf(gens: &[(i128, i128)]) -> (i128, i128, i128) {
    // to (1, omega) coordinates: (p + q sqrt D)/2 = (p - q)/2 + q omega
    let mut vs: Vec<(i128, i128)> = gens.iter().map(|&(p, q)| ((p - q) / 2, q)).collect();
    let mut top: Option<(i128, i128)> = None;
    let mut zeros: Vec<i128> = Vec::new();
    for v in vs.drain(..) {
        let mut v = v;
        if v.1 == 0 {
            zeros.push(v.0);
            continue;
        }
        match top {
            None => top = Some(v),
            Some(mut t) => {
                while v.1 != 0 {
                    let q = t.1.div_euclid(v.1);
                    t = (t.0 - q * v.0, t.1 - q * v.1);
                    std::mem::swap(&mut t, &mut v);
                }
                zeros.push(v.0);
                top = Some(t);
            }
        }
    }
    let mut a = 0i128;
    for z in zeros {
        a = xgcd(a, z).0;
    }
    let (mut b, mut c) = top.unwrap_or((0, 0));
    if c < 0 {
        b = -b;
        c = -c;
    }
    if a != 0 {
        b = b.rem_euclid(a);
    }
    (a, b, c)
}

/// HNF of the product of two ideals from the four pairwise products of bases;
/// an independent check on [`Ideal::mul`].
pub fn product_hnf(d: i64, x: &Ideal, y: &Ideal) -> (i128, i128, i128) {
    let mut gens = Vec::new();
    for u in x.basis() {
        for v in y.basis() {
            let p = KNum::half(d, u.0, u.1).mul(&KNum::half(d, v.0, v.1));
            gens.push(p.half_coords().expect("product of integral elements"));
        }
    }
    hnf(&gens)
}
