//! Positive definite binary quadratic forms and the class group.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ideal::Ideal;
use super::kronecker::gcd;

/// a x^2 + b x y + c y^2
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Form { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn is_reduced(&self) -> bool {
        self.b.abs() <= self.a && self.a <= self.c && !((self.b.abs() == self.a || self.a == self.c) && self.b < 0)
    }

    pub fn reduce(&self) -> Form {
        let d = self.disc() as i128;
        let (mut a, mut b) = (self.a as i128, self.b as i128);
        loop {
            // b into (-a, a]
            let mut r = b.rem_euclid(2 * a);
            if r > a {
                r -= 2 * a;
            }
            b = r;
            let c = (b * b - d) / (4 * a);
            if a > c {
                a = c;
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            return Form::new(a as i64, b as i64, c as i64);
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// All reduced primitive forms of discriminant D < 0, principal form first.
pub fn reduced_forms(d: i64) -> Vec<Form> {
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in (-a + 1)..=a {
            if (b - d).rem_euclid(2) != 0 || (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            let f = Form::new(a, b, c);
            if f.is_reduced() && gcd(gcd(a, b), c) == 1 {
                out.push(f);
            }
        }
        a += 1;
    }
    out
}

/// The class group as an explicit abelian group on reduced forms.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub d: i64,
    pub forms: Vec<Form>,
    index: HashMap<Form, usize>,
    pub table: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub order: Vec<u32>,
    /// Independent generators (class index, order); the group is their direct product.
    pub gens: Vec<(usize, u32)>,
    /// Exponents of each class on `gens`.
    pub dlog: Vec<Vec<u32>>,
}

impl ClassGroup {
    pub fn new(d: i64) -> Self {
        let forms = reduced_forms(d);
        let h = forms.len();
        let index: HashMap<Form, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let ideals: Vec<Ideal> = forms.iter().map(Ideal::from_form).collect();
        let mut table = vec![vec![0; h]; h];
        for i in 0..h {
            for j in 0..h {
                let f = ideals[i].mul(&ideals[j]).to_form().reduce();
                table[i][j] = index[&f];
            }
        }
        let inverse: Vec<usize> = (0..h).map(|i| (0..h).find(|&j| table[i][j] == 0).expect("group inverse")).collect();
        let order: Vec<u32> = (0..h)
            .map(|i| {
                let mut x = i;
                let mut n = 1;
                while x != 0 {
                    x = table[x][i];
                    n += 1;
                }
                n
            })
            .collect();
        let mut cg = ClassGroup { d, forms, index, table, inverse, order, gens: Vec::new(), dlog: Vec::new() };
        cg.find_basis();
        cg
    }

    pub fn h(&self) -> usize {
        self.forms.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, f: &Form) -> usize {
        self.index[&f.reduce()]
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn pow(&self, i: usize, e: u32) -> usize {
        let mut x = 0;
        for _ in 0..e {
            x = self.table[x][i];
        }
        x
    }

    fn subgroup(&self, gens: &[(usize, u32)]) -> Vec<usize> {
        let mut elems = vec![0usize];
        for &(g, n) in gens {
            let mut next = Vec::new();
            for &e in &elems {
                let mut x = e;
                for _ in 0..n {
                    next.push(x);
                    x = self.table[x][g];
                }
            }
            elems = next;
        }
        elems
    }

    // Greedy: an element of maximal order in G/H lifts to one of the same
    // order after correcting by an element of H, and then splits off.
    fn find_basis(&mut self) {
        let h = self.h();
        let mut gens: Vec<(usize, u32)> = Vec::new();
        loop {
            let sub = self.subgroup(&gens);
            if sub.len() == h {
                break;
            }
            let in_sub = |x: usize, s: &Vec<usize>| s.contains(&x);
            let mut best = (0usize, 0u32);
            for g in 0..h {
                let mut x = g;
                let mut m = 1;
                while !in_sub(x, &sub) {
                    x = self.table[x][g];
                    m += 1;
                }
                if m > best.1 {
                    best = (g, m);
                }
            }
            let (g, m) = best;
            let gm = self.pow(g, m);
            let corr = sub.iter().copied().find(|&y| self.pow(y, m) == gm).expect("lift in finite abelian group");
            let g2 = self.table[g][self.inverse[corr]];
            gens.push((g2, m));
        }
        let mut dlog = vec![Vec::new(); h];
        let mut exps = vec![0u32; gens.len()];
        loop {
            let mut x = 0;
            for (i, &(g, _)) in gens.iter().enumerate() {
                x = self.table[x][self.pow(g, exps[i])];
            }
            dlog[x] = exps.clone();
            let mut i = 0;
            while i < gens.len() {
                exps[i] += 1;
                if exps[i] < gens[i].1 {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            if i == gens.len() {
                break;
            }
        }
        self.gens = gens;
        self.dlog = dlog;
    }
}
