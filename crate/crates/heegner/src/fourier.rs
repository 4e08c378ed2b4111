//! Fourier coefficients a_m(A) of the holomorphic projection, split into the
//! finite part a_fin and the archimedean part a_inf, and integer relations
//! among cusp-form coefficients.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arithsums::{PrimeLogs, SigmaContext};
use crate::dirichlet::lprime_over_l_1;
use crate::error::{Error, Result};
use crate::heckechar::{HeckeChar, ThetaTable};
use crate::quadfield::{factorize, gcd, kronecker, Disc};
use crate::special::jacobi::{digamma_int, p_kt_poly, JacobiIndex, QKernel};
use crate::special::num::{pi, Complex, Evaluation, TailKind};
use crate::special::poly::RatPoly;

/// Exponent margin in the tail bound.
pub const TAIL_DELTA: f64 = 0.1;
/// Terms used to calibrate the tail constant.
pub const TAIL_CALIBRATION: u64 = 100;

#[derive(Clone, Debug)]
pub struct FourierParams {
    pub idx: JacobiIndex,
    pub level: i64,
    pub beta: i64,
    pub disc: Disc,
    pub chi: HeckeChar,
    /// The class A.
    pub cls: usize,
    /// Number of terms kept in the archimedean series.
    pub n0: u64,
    /// Largest acceptable tail estimate, if any.
    pub tail_budget: Option<f64>,
    pub prec: u32,
}

impl FourierParams {
    pub fn new(idx: JacobiIndex, level: i64, beta: i64, chi: HeckeChar, cls: usize, n0: u64) -> Result<Self> {
        let disc = chi.disc.clone();
        if idx.t == 0 || idx.t != chi.t {
            return Err(Error::Precondition(format!("need 0 < t = chi.t, got t={} chi.t={}", idx.t, chi.t)));
        }
        if level < 1 {
            return Err(Error::Precondition("level must be positive".into()));
        }
        for (p, _) in factorize(level as u64) {
            if kronecker(disc.d, p as i64) != 1 {
                return Err(Error::Precondition(format!("{p} | N does not split in Q(sqrt {})", disc.d)));
            }
        }
        if (beta as i128 * beta as i128 - disc.d as i128).rem_euclid(4 * level as i128) != 0 {
            return Err(Error::Precondition(format!("beta^2 != D mod 4N for beta = {beta}")));
        }
        if cls >= disc.h() {
            return Err(Error::Precondition(format!("class {cls} out of range")));
        }
        let prec = chi.prec;
        Ok(FourierParams { idx, level, beta, disc, chi, cls, n0, tail_budget: None, prec })
    }

    pub fn with_budget(mut self, budget: f64) -> Self {
        self.tail_budget = Some(budget);
        self
    }
}

/// The pieces of a_inf(m); every field already carries the factor m^{k-t-1}.
#[derive(Clone, Debug)]
pub struct ArchPart {
    pub eval: Evaluation,
    /// m^{k-t-1} (h/u) D^t r(m) (psi + psi + log(|D|/4pi^2) + 2 L'/L).
    pub constant: Complex,
    /// m^{k-t-1} sum_{n <= N0} sigma(n) r(m|D| + nN) Q(...).
    pub series: Complex,
    /// Largest |term| seen, scaled by m^{k-t-1}.
    pub max_term: f64,
    pub tail_constant: f64,
}

/// Precomputed tables for the coefficients a_m with m <= m_max.
pub struct FourierEngine {
    pub fp: FourierParams,
    pub m_max: u64,
    pub sigma: SigmaContext,
    sigma_table: Vec<i64>,
    /// r_{conj A, chi}
    theta: ThetaTable,
    p_poly: RatPoly,
    q: QKernel,
    d_pow_t: Rational,
}

impl FourierEngine {
    pub fn new(fp: FourierParams, m_max: u64) -> Result<Self> {
        let d = fp.disc.d;
        let dd = d.unsigned_abs();
        let upto = m_max * dd + fp.n0 * fp.level as u64 + 1;
        let theta = ThetaTable::new(&fp.chi, fp.disc.conj_class(fp.cls), upto)?;
        let sigma = SigmaContext::new(&fp.disc, fp.level, fp.beta, fp.cls)?;
        let sigma_table = sigma.sigma_table(fp.n0);
        let p_poly = p_kt_poly(fp.idx);
        let q = QKernel::new(fp.idx);
        let d_pow_t = Rational::from(Integer::from(d).pow(fp.idx.t));
        Ok(FourierEngine { fp, m_max, sigma, sigma_table, theta, p_poly, q, d_pow_t })
    }

    fn check_m(&self, m: u64) -> Result<()> {
        if m == 0 || m > self.m_max {
            return Err(Error::Precondition(format!("m = {m} outside 1..={}", self.m_max)));
        }
        if gcd(m as i64, self.fp.level) != 1 {
            return Err(Error::Precondition(format!("(m, N) = ({m}, {}) is not 1", self.fp.level)));
        }
        Ok(())
    }

    fn m_power(&self, m: u64) -> Rational {
        Rational::from(Integer::from(m).pow(self.fp.idx.n()))
    }

    /// (h/u) D^t as an exact rational.
    fn hud(&self) -> Rational {
        Rational::from((self.fp.disc.h() as u64, self.fp.disc.u)) * &self.d_pow_t
    }

    pub fn r(&self, n: u64) -> Complex {
        self.theta.r_complex(n, self.fp.prec)
    }

    pub fn theta(&self) -> &ThetaTable {
        &self.theta
    }

    pub fn sigma_value(&self, n: u64) -> i64 {
        if n as usize >= self.sigma_table.len() {
            self.sigma.sigma(n)
        } else {
            self.sigma_table[n as usize]
        }
    }

    /// a_fin(m) numerically (complex when h > 1).
    pub fn a_fin(&self, m: u64) -> Result<Complex> {
        self.check_m(m)?;
        let p = self.fp.prec;
        let dd = self.fp.disc.d.unsigned_abs();
        let n_level = self.fp.level as u64;
        let lnm = Float::with_val(p, Float::with_val(p, self.fp.level).ln() - Float::with_val(p, m).ln());
        let mut acc = self.r(m).scale(&(Float::with_val(p, &self.hud()) * lnm));
        let mut n = 1;
        while n * n_level <= m * dd {
            let arg = m * dd - n * n_level;
            if !self.theta.is_zero(arg) {
                let s = self.sigma.sigma_prime_value(n, p);
                let x = Rational::from(1) - Rational::from((2 * n * n_level, m * dd));
                let pv = Float::with_val(p, &self.p_poly.eval_rational(&x));
                acc = &acc - &self.r(arg).scale(&(s * pv));
            }
            n += 1;
        }
        Ok(acc.scale(&Float::with_val(p, &self.m_power(m))))
    }

    /// a_fin(m) as an exact combination of prime logarithms; needs rational r.
    pub fn a_fin_exact(&self, m: u64) -> Result<PrimeLogs> {
        self.check_m(m)?;
        let dd = self.fp.disc.d.unsigned_abs();
        let n_level = self.fp.level as u64;
        let rat = |n: u64| {
            self.theta
                .r_rational(n)
                .ok_or_else(|| Error::Precondition("exact finite part needs rational theta coefficients".into()))
        };
        let mut out = PrimeLogs::log_of(&Rational::from((n_level, m)), &(self.hud() * rat(m)?));
        let mut n = 1;
        while n * n_level <= m * dd {
            let arg = m * dd - n * n_level;
            if !self.theta.is_zero(arg) {
                let x = Rational::from(1) - Rational::from((2 * n * n_level, m * dd));
                let c = rat(arg)? * self.p_poly.eval_rational(&x);
                out.add(&self.sigma.sigma_prime(n).scaled(&-c));
            }
            n += 1;
        }
        Ok(out.scaled(&self.m_power(m)))
    }

    /// The archimedean constant term (without the factor m^{k-t-1}).
    fn arch_constant(&self, m: u64) -> Result<Complex> {
        let p = self.fp.prec;
        let r = self.r(m);
        if r.abs() == 0 {
            return Ok(Complex::zero(p));
        }
        let (k, t) = (self.fp.idx.k, self.fp.idx.t);
        let mut c = digamma_int(k + t, p) + digamma_int(k - t, p);
        let dd = self.fp.disc.d.unsigned_abs();
        let pi2 = Float::with_val(p, pi(p).square_ref()) * 4u32;
        c += Float::with_val(p, Float::with_val(p, dd) / pi2).ln();
        c += lprime_over_l_1(&self.fp.disc, p)? * 2u32;
        Ok(r.scale(&(c * Float::with_val(p, &self.hud()))))
    }

    fn arch_term(&self, m: u64, n: u64) -> Result<Option<Complex>> {
        let dd = self.fp.disc.d.unsigned_abs();
        let n_level = self.fp.level as u64;
        let arg = m * dd + n * n_level;
        let s = self.sigma_value(n);
        if s == 0 || self.theta.is_zero(arg) {
            return Ok(None);
        }
        let x = Rational::from(1) + Rational::from((2 * n * n_level, m * dd));
        let qv = self.q.eval_rational(&x, self.fp.prec)?;
        Ok(Some(self.r(arg).scale(&(qv * s))))
    }

    /// a_inf(m) with its truncation report.
    pub fn a_inf_detailed(&self, m: u64) -> Result<ArchPart> {
        self.check_m(m)?;
        let p = self.fp.prec;
        let mut series = Complex::zero(p);
        let mut max_term: f64 = 0.0;
        let mut calib = Vec::new();
        for n in 1..=self.fp.n0 {
            if let Some(term) = self.arch_term(m, n)? {
                let a = term.abs().to_f64();
                max_term = max_term.max(a);
                if calib.len() < TAIL_CALIBRATION as usize || n <= TAIL_CALIBRATION {
                    calib.push((n, a));
                }
                series = &series + &term;
            }
        }
        let c_tail = tail_constant(&calib, self.fp.idx.k);
        let mp = Float::with_val(p, &self.m_power(m));
        let tail = series_tail(&calib, self.fp.idx.k, self.fp.n0) * mp.to_f64();
        if let Some(b) = self.fp.tail_budget {
            if tail > b {
                return Err(Error::TailBudget { estimate: tail, budget: b });
            }
        }
        let constant = self.arch_constant(m)?.scale(&mp);
        let series = series.scale(&mp);
        let value = &constant - &series;
        Ok(ArchPart {
            eval: Evaluation { value, prec: p, truncation: self.fp.n0, tail, tail_kind: TailKind::Heuristic },
            constant,
            series,
            max_term: max_term * mp.to_f64(),
            tail_constant: c_tail,
        })
    }

    pub fn a_inf(&self, m: u64) -> Result<Evaluation> {
        Ok(self.a_inf_detailed(m)?.eval)
    }

    /// a_m(A) = a_fin(m) + a_inf(m).
    pub fn a_m(&self, m: u64) -> Result<Evaluation> {
        let fin = Evaluation::exact(self.a_fin(m)?);
        Ok(fin.add(&self.a_inf(m)?))
    }

    /// The archimedean series term for shell n, scaled by m^{k-t-1}; zero if absent.
    pub fn arch_series_term(&self, m: u64, n: u64) -> Result<Complex> {
        let mp = Float::with_val(self.fp.prec, &self.m_power(m));
        Ok(self.arch_term(m, n)?.map(|c| c.scale(&mp)).unwrap_or_else(|| Complex::zero(self.fp.prec)))
    }
}

/// C with |term_n| <= C n^{1/2-k+delta}, fitted on the first nonzero terms.
pub fn tail_constant(terms: &[(u64, f64)], k: u32) -> f64 {
    let e = k as f64 - 0.5 - TAIL_DELTA;
    let first: Vec<_> = terms.iter().filter(|(_, a)| *a > 0.0).collect();
    let upto = first.iter().filter(|(n, _)| *n <= TAIL_CALIBRATION).count().max(1);
    first.iter().take(upto).map(|(n, a)| 2.0 * a * (*n as f64).powf(e)).fold(0.0, f64::max)
}

/// Heuristic bound for sum_{n > n0} |term_n| from the calibrated power law.
pub fn series_tail(terms: &[(u64, f64)], k: u32, n0: u64) -> f64 {
    let expo = k as f64 - 1.5 - TAIL_DELTA;
    tail_constant(terms, k) * (n0 as f64).powf(-expo) / expo
}

/// dim S_k(Gamma_0(N)) for even k >= 2 from the genus and elliptic-point counts.
pub fn dim_cusp_forms(k: u32, n: u64) -> u64 {
    assert!(k >= 2 && k % 2 == 0, "even weight >= 2");
    let fac = factorize(n);
    let mut mu = Rational::from(n);
    for &(p, _) in &fac {
        mu *= Rational::from((p + 1, p));
    }
    let nu2: i64 = if n % 4 == 0 { 0 } else { fac.iter().map(|&(p, _)| 1 + kronecker(-4, p as i64) as i64).product() };
    let nu3: i64 = if n % 9 == 0 { 0 } else { fac.iter().map(|&(p, _)| 1 + kronecker(-3, p as i64) as i64).product() };
    let nuinf: i64 = crate::quadfield::divisors(n).iter().map(|&d| euler_phi(gcd(d as i64, (n / d) as i64) as u64) as i64).sum();
    // g = 1 + mu/12 - nu2/4 - nu3/3 - nuinf/2
    let g = Rational::from(1) + Rational::from(&mu / 12) - Rational::from((nu2, 4)) - Rational::from((nu3, 3)) - Rational::from((nuinf, 2));
    let g = g.numer().to_i64().expect("genus is an integer");
    if k == 2 {
        return g as u64;
    }
    let k = k as i64;
    let d = (k - 1) * (g - 1) + (k / 4) * nu2 + (k / 3) * nu3 + (k / 2 - 1) * nuinf;
    d.max(0) as u64
}

fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Which coefficients a relation may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationCondition {
    /// lambda_m = 0 unless (m, N) = 1.
    Coprime,
    /// Additionally lambda_m = 0 when r_{A,chi}(m) != 0; avoids the diagonal term.
    CoprimeDiagonalFree,
}

/// Candidate indices allowed by the relation condition.
pub fn admissible_support(candidates: &[u64], level: i64, theta: &ThetaTable, cond: RelationCondition) -> Vec<u64> {
    candidates
        .iter()
        .copied()
        .filter(|&m| gcd(m as i64, level) == 1)
        .filter(|&m| cond == RelationCondition::Coprime || m > theta.upto() || theta.is_zero(m))
        .collect()
}

/// Nonzero integer lambda on `support` with sum_m lambda_m rows[i][m] = 0 for
/// every basis row; rows are indexed like `support`.
pub fn find_relation(rows: &[Vec<Rational>], support: &[u64]) -> Result<Vec<(u64, Integer)>> {
    if support.is_empty() {
        return Err(Error::NoRelation);
    }
    if rows.is_empty() {
        return Ok(support.iter().enumerate().map(|(i, &m)| (m, Integer::from(i32::from(i == 0)))).collect());
    }
    let cols = support.len();
    for r in rows {
        if r.len() != cols {
            return Err(Error::Precondition("row length differs from support size".into()));
        }
    }
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(pr) = (row..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(row, pr);
        let inv = Rational::from(1) / a[row][c].clone();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != row && a[i][c] != 0 {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = Rational::from(&f * &a[row][j]);
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let Some(free) = (0..cols).find(|c| !pivots.contains(c)) else { return Err(Error::NoRelation) };
    let mut v = vec![Rational::new(); cols];
    v[free] = Rational::from(1);
    for (i, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[i][free].clone();
    }
    let mut den = Integer::from(1);
    for x in &v {
        den.lcm_mut(x.denom());
    }
    let mut ints: Vec<Integer> = v.iter().map(|x| Integer::from(x.numer() * Integer::from(&den / x.denom()))).collect();
    let mut g = Integer::new();
    for x in &ints {
        g.gcd_mut(x);
    }
    if g > 1 {
        for x in ints.iter_mut() {
            *x /= &g;
        }
    }
    Ok(support.iter().copied().zip(ints).collect())
}

/// Whether lambda annihilates every row exactly.
pub fn annihilates(rows: &[Vec<Rational>], lambda: &[(u64, Integer)]) -> bool {
    rows.iter().all(|r| {
        let mut s = Rational::new();
        for (x, (_, l)) in r.iter().zip(lambda) {
            s += Rational::from(x * l);
        }
        s == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(dim_cusp_forms(4, 3), 0);
        assert_eq!(dim_cusp_forms(6, 3), 1);
        assert_eq!(dim_cusp_forms(2, 11), 1);
        assert_eq!(dim_cusp_forms(12, 1), 1);
        assert_eq!(dim_cusp_forms(2, 1), 0);
    }

    #[test]
    fn relation_by_hand() {
        let rows = vec![vec![Rational::from(-6), Rational::from(9)]];
        let l = find_relation(&rows, &[2, 3]).unwrap();
        assert_eq!(l, vec![(2, Integer::from(3)), (3, Integer::from(2))]);
        assert!(annihilates(&rows, &l));
        assert!(find_relation(&[vec![Rational::from(1)]], &[2]).is_err());
        let l = find_relation(&[], &[5, 7]).unwrap();
        assert_eq!(l[0].1, 1);
    }
}
