//! The Green's kernel g_{k,t}, sums over the Hecke correspondence R_N^m at
//! pairs of Heegner points, the regularised diagonal, and the archimedean
//! height identities.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arithsums::PrimeLogs;
use crate::error::{Error, Result};
use crate::fourier::{series_tail, FourierEngine, FourierParams};
use crate::heckechar::HeckeChar;
use crate::quadfield::{gcd, HeegnerPoint, KNum};
use crate::special::eta::log_abs_2pi_eta4;
use crate::special::jacobi::{psi_pair, JacobiIndex, QKernel};
use crate::special::kernel::green_kernel;
use crate::special::num::{binomial, Complex, Evaluation, TailKind};

/// g_{k,t}(z, z') = -Q_{k,t}(1 + |z - z'|^2 / (2 y y')).
pub fn g_kt(idx: JacobiIndex, z: &Complex, w: &Complex) -> Result<Float> {
    green_kernel(&QKernel::new(idx), z, w)
}

/// An integer matrix of determinant m with N | c, taken up to sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl LatticeMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64, m: i64, level: i64) -> Result<Self> {
        if a as i128 * d as i128 - b as i128 * c as i128 != m as i128 {
            return Err(Error::Domain(format!("det({a} {b}; {c} {d}) != {m}")));
        }
        if c % level != 0 {
            return Err(Error::Domain(format!("{level} does not divide c = {c}")));
        }
        Ok(LatticeMatrix { a, b, c, d }.normalized())
    }

    /// Representative with c > 0, or c = 0 and d > 0.
    pub fn normalized(self) -> Self {
        if self.c < 0 || (self.c == 0 && self.d < 0) {
            LatticeMatrix { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            self
        }
    }

    pub fn det(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    pub fn apply(&self, z: &Complex) -> Complex {
        let p = z.prec();
        let f = |x: i64| Float::with_val(p, x);
        let num = Complex::new(Float::with_val(p, &z.re * f(self.a)) + f(self.b), Float::with_val(p, &z.im * f(self.a)));
        let den = Complex::new(Float::with_val(p, &z.re * f(self.c)) + f(self.d), Float::with_val(p, &z.im * f(self.c)));
        num.div(&den)
    }
}

/// Upper-triangular representatives of Gamma_0(N) \ R_N^m for (m, N) = 1.
pub fn hecke_cosets(m: i64, level: i64) -> Vec<LatticeMatrix> {
    let mut out = Vec::new();
    for a in 1..=m {
        if m % a != 0 || gcd(a, level) != 1 {
            continue;
        }
        let d = m / a;
        for b in 0..d {
            out.push(LatticeMatrix { a, b, c: 0, d });
        }
    }
    out
}

/// What to do with the terms gamma tau2 = tau1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagonalPolicy {
    Exclude,
    Regularize,
}

#[derive(Clone, Debug)]
pub struct GreenConfig {
    pub idx: JacobiIndex,
    pub level: i64,
    pub beta: i64,
    pub n_max: u64,
    pub prec: u32,
    pub policy: DiagonalPolicy,
    pub tail_budget: Option<f64>,
}

impl GreenConfig {
    pub fn new(idx: JacobiIndex, level: i64, beta: i64, n_max: u64, prec: u32) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::Precondition("n_max must be at least 1".into()));
        }
        Ok(GreenConfig { idx, level, beta, n_max, prec, policy: DiagonalPolicy::Regularize, tail_budget: None })
    }
}

/// One matrix of R_N^m with its shell index and 4 A1 A2 alpha = x + y sqrt D.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShellPoint {
    pub gamma: LatticeMatrix,
    pub n: u64,
    pub alpha4: (i128, i128),
}

/// R_N^m / +-1 at a pair of Heegner points, grouped by shell.
#[derive(Clone, Debug, Default)]
pub struct Shells {
    pub diagonal: Vec<ShellPoint>,
    pub by_shell: BTreeMap<u64, Vec<ShellPoint>>,
}

impl Shells {
    pub fn count(&self, n: u64) -> usize {
        self.by_shell.get(&n).map_or(0, |v| v.len())
    }
}

fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (g, x, y) = crate::quadfield::kronecker::xgcd(a as i128, b as i128);
    (g as i64, x as i64, y as i64)
}

/// All gamma in R_N^m / +-1 with shell index n <= n_max, where
/// n = A1 A2 N(beta) / N and beta = (tau1 - gamma tau2) j(gamma, tau2).
pub fn enumerate_rnm(m: i64, p1: &HeegnerPoint, p2: &HeegnerPoint, n_max: u64) -> Result<Shells> {
    let level = p1.level;
    if gcd(m, level) != 1 || m < 1 {
        return Err(Error::Precondition(format!("need m >= 1 and (m, N) = 1, got m = {m}")));
    }
    if p1.d != p2.d || p2.level != level {
        return Err(Error::Precondition("Heegner points of different discriminant or level".into()));
    }
    let d = p1.d as i128;
    let (a1, b1, a2, b2) = (p1.a as i128, p1.b as i128, p2.a as i128, p2.b as i128);
    let dd = (-p1.d) as f64;
    let (x1, y1) = (-(p1.b as f64) / (2.0 * p1.a as f64), dd.sqrt() / (2.0 * p1.a as f64));
    let (x2, y2) = (-(p2.b as f64) / (2.0 * p2.a as f64), dd.sqrt() / (2.0 * p2.a as f64));
    // cosh distance at the outermost shell
    let r = 2.0 * n_max as f64 * level as f64 / (m as f64 * dd);
    let y_min = y1 / ((1.0 + r) + ((1.0 + r).powi(2) - 1.0).sqrt());
    let jbound = m as f64 * y2 / y_min * (1.0 + 1e-9) + 1e-9;
    let den = 16 * a1 * a2 * level as i128;
    let mut out = Shells::default();
    let cmax = (jbound.sqrt() / y2) as i64 + 1;
    let mut c = 0i64;
    while c <= cmax {
        // (c x2 + d)^2 + c^2 y2^2 <= jbound
        let rem = jbound - (c as f64 * y2).powi(2);
        if rem < 0.0 {
            c += level;
            continue;
        }
        let s = rem.sqrt();
        let dlo = (-(c as f64) * x2 - s).floor() as i64 - 1;
        let dhi = (-(c as f64) * x2 + s).ceil() as i64 + 1;
        for dv in dlo..=dhi {
            if c == 0 && dv <= 0 {
                continue;
            }
            let (g, u, v) = xgcd(c, dv);
            let g = g.abs();
            if g == 0 || m % g != 0 {
                continue;
            }
            // c u + d v = +-g; a d - b c = m
            let sgn = if c as i128 * u as i128 + dv as i128 * v as i128 == g as i128 { 1 } else { -1 };
            let a0 = sgn * v * (m / g);
            let b0 = -sgn * u * (m / g);
            // w = gamma tau2 = w0 + j / g
            let jz = (c as f64 * x2 + dv as f64).powi(2) + (c as f64 * y2).powi(2);
            let im_w = m as f64 * y2 / jz;
            let room = 2.0 * r * y1 * im_w - (y1 - im_w).powi(2);
            if room < -1e-9 {
                continue;
            }
            let half = room.max(0.0).sqrt() + 1e-9;
            let re_w0 = {
                // Re((a0 tau + b0)/(c tau + d)) = ((a0 x + b0)(c x + d) + a0 c y^2) / |c tau + d|^2
                let (x, y) = (x2, y2);
                ((a0 as f64 * x + b0 as f64) * (c as f64 * x + dv as f64) + a0 as f64 * c as f64 * y * y) / jz
            };
            let gf = g as f64;
            let jlo = ((x1 - half - re_w0) * gf).floor() as i64 - 1;
            let jhi = ((x1 + half - re_w0) * gf).ceil() as i64 + 1;
            let (cs, ds) = (c / g, dv / g);
            for j in jlo..=jhi {
                let a = a0 + j * cs;
                let b = b0 + j * ds;
                let (ci, di, ai, bi) = (c as i128, dv as i128, a as i128, b as i128);
                let xb = ci * (b1 * b2 + d) - 2 * a2 * di * b1 + 2 * a1 * ai * b2 - 4 * a1 * a2 * bi;
                let yb = -ci * (b1 + b2) + 2 * a2 * di - 2 * a1 * ai;
                let nb = xb * xb - d * yb * yb;
                if nb % den != 0 {
                    return Err(Error::Domain(format!("non-integral shell at gamma = ({a} {b}; {c} {dv})")));
                }
                let n = nb / den;
                if n > n_max as i128 {
                    continue;
                }
                let xa = ci * (b1 * b2 - d) - 2 * a2 * di * b1 + 2 * a1 * ai * b2 - 4 * a1 * a2 * bi;
                let ya = ci * (b2 - b1) - 2 * a2 * di - 2 * a1 * ai;
                let pt = ShellPoint { gamma: LatticeMatrix { a, b, c, d: dv }, n: n as u64, alpha4: (xa, ya) };
                if n == 0 {
                    out.diagonal.push(pt);
                } else {
                    out.by_shell.entry(n as u64).or_default().push(pt);
                }
            }
        }
        c += level;
    }
    Ok(out)
}

/// sum over points of alpha^{2t}, exactly, as (4 A1 A2)^{2t} alpha^{2t} = x + y sqrt D.
fn alpha_power_sum(d: i64, pts: &[ShellPoint], t: u32) -> Result<(Integer, Integer)> {
    let mut sx = Integer::new();
    let mut sy = Integer::new();
    for p in pts {
        let (mut x, mut y) = (Integer::from(1), Integer::new());
        let (px, py) = (Integer::from(p.alpha4.0), Integer::from(p.alpha4.1));
        for _ in 0..2 * t {
            let nx = Integer::from(&x * &px) + Integer::from(&y * &py) * d;
            let ny = Integer::from(&x * &py) + Integer::from(&y * &px);
            x = nx;
            y = ny;
        }
        sx += x;
        sy += y;
    }
    Ok((sx, sy))
}

/// Exact sum of alpha^{2t} over a set of points.
pub fn alpha_sum(p1: &HeegnerPoint, p2: &HeegnerPoint, pts: &[ShellPoint], t: u32) -> Result<KNum> {
    let (x, y) = alpha_power_sum(p1.d, pts, t)?;
    let den = Integer::from(16 * p1.a as i128 * p1.a as i128 * p2.a as i128 * p2.a as i128).pow(t);
    Ok(KNum::new(p1.d, Rational::from((x, den.clone())), Rational::from((y, den))))
}

/// The regularised diagonal value
/// rho(z) = psi(k+t) + psi(k-t) - 2 psi(1) - log(4 y^2) - 2 log|2 pi eta^4(z)|.
pub fn rho_diagonal(idx: JacobiIndex, z: &Complex) -> Result<Float> {
    let p = z.prec();
    let psi = Float::with_val(p, &psi_pair(idx));
    let y2 = Float::with_val(p, z.im.square_ref()) * 4u32;
    Ok(psi - y2.ln() - log_abs_2pi_eta4(z)? * 2u32)
}

/// g(z, z + eps) - log|2 pi i eta^4(z) eps|_v with |x|_v = |x|^2.
pub fn rho_limit_probe(idx: JacobiIndex, z: &Complex, eps: &Complex) -> Result<Float> {
    let w = z + eps;
    let g = g_kt(idx, z, &w)?;
    let p = z.prec();
    let l = log_abs_2pi_eta4(z)? + Float::with_val(p, eps.abs().ln());
    Ok(g - l * 2u32)
}

/// Shell-by-shell lattice sum at one pair of points.
#[derive(Clone, Debug)]
pub struct PairSum {
    pub p1: HeegnerPoint,
    pub p2: HeegnerPoint,
    /// chi(conj(a1) a2).
    pub weight: Complex,
    /// sum over shell n of alpha^{2t}, exact.
    pub shells: BTreeMap<u64, KNum>,
    pub shell_counts: BTreeMap<u64, usize>,
    pub diagonal: KNum,
    pub diagonal_count: usize,
}

/// Per-shell sums alpha^{2t} for one pair of Heegner points.
pub fn pair_sum(chi: &HeckeChar, m: i64, p1: &HeegnerPoint, p2: &HeegnerPoint, n_max: u64) -> Result<PairSum> {
    let sh = enumerate_rnm(m, p1, p2, n_max)?;
    let a = p1.ideal().conj().mul(&p2.ideal());
    let weight = chi.eval(&a).to_complex(chi.prec);
    let mut shells = BTreeMap::new();
    let mut shell_counts = BTreeMap::new();
    for (n, pts) in &sh.by_shell {
        shells.insert(*n, alpha_sum(p1, p2, pts, chi.t)?);
        shell_counts.insert(*n, pts.len());
    }
    let diagonal = alpha_sum(p1, p2, &sh.diagonal, chi.t)?;
    Ok(PairSum { p1: *p1, p2: *p2, weight, shells, shell_counts, diagonal, diagonal_count: sh.diagonal.len() })
}

/// G^m(tau1, tau2) = sum_{gamma tau2 != tau1} g(tau1, gamma tau2) alpha^{2t}, truncated at n_max.
pub fn g_m_weighted(cfg: &GreenConfig, m: i64, p1: &HeegnerPoint, p2: &HeegnerPoint, chi: &HeckeChar) -> Result<Evaluation> {
    let ps = pair_sum(chi, m, p1, p2, cfg.n_max)?;
    let q = QKernel::new(cfg.idx);
    let terms = shell_terms(cfg, &q, m, p1.d, &ps.shells, &Complex::one(cfg.prec))?;
    finish(cfg, terms)
}

fn shell_terms(cfg: &GreenConfig, q: &QKernel, m: i64, d: i64, shells: &BTreeMap<u64, KNum>, w: &Complex) -> Result<Vec<(u64, Complex)>> {
    let p = cfg.prec;
    let dd = (-d) as u64;
    let mut out = Vec::new();
    for (n, s) in shells {
        let x = Rational::from(1) + Rational::from((2 * n * cfg.level as u64, m as u64 * dd));
        let g = -q.eval_rational(&x, p)?;
        out.push((*n, (&s.to_complex(p) * w).scale(&g)));
    }
    Ok(out)
}

fn finish(cfg: &GreenConfig, terms: Vec<(u64, Complex)>) -> Result<Evaluation> {
    let p = cfg.prec;
    let mut acc = Complex::zero(p);
    let calib: Vec<(u64, f64)> = terms.iter().map(|(n, c)| (*n, c.abs().to_f64())).collect();
    for (_, c) in &terms {
        acc = &acc + c;
    }
    let tail = series_tail(&calib, cfg.idx.k, cfg.n_max);
    if let Some(b) = cfg.tail_budget {
        if tail > b {
            return Err(Error::TailBudget { estimate: tail, budget: b });
        }
    }
    Ok(Evaluation { value: acc, prec: p, truncation: cfg.n_max, tail, tail_kind: TailKind::Heuristic })
}

/// gamma^m(A) summed over class pairs (A1, A2) with A1^{-1} A2 = A.
#[derive(Clone, Debug)]
pub struct GammaReport {
    /// Off-diagonal part plus (under Regularize) the diagonal part.
    pub eval: Evaluation,
    /// Off-diagonal lattice sum alone.
    pub off_diagonal: Complex,
    /// Diagonal contribution sum_pairs chi(a) (sum alpha^{2t}) rho(tau1).
    pub diagonal: Complex,
    /// sum_pairs chi(a) sum_{shell n} alpha^{2t}.
    pub weighted_shells: BTreeMap<u64, Complex>,
    /// chi(a) * sum_{diagonal} alpha^{2t} per pair.
    pub diagonal_weights: Vec<Complex>,
    pub pairs: Vec<(usize, usize)>,
}

pub fn gamma_m(cfg: &GreenConfig, chi: &HeckeChar, m: i64, cls: usize) -> Result<GammaReport> {
    let disc = &chi.disc;
    let p = cfg.prec;
    let q = QKernel::new(cfg.idx);
    let mut weighted: BTreeMap<u64, Complex> = BTreeMap::new();
    let mut diagonal = Complex::zero(p);
    let mut diagonal_weights = Vec::new();
    let mut pairs = Vec::new();
    for c1 in 0..disc.h() {
        let c2 = disc.cg.mul(c1, cls);
        let p1 = disc.heegner_point(cfg.level, cfg.beta, c1)?;
        let p2 = disc.heegner_point(cfg.level, cfg.beta, c2)?;
        let ps = pair_sum(chi, m, &p1, &p2, cfg.n_max)?;
        for (n, s) in &ps.shells {
            let v = &s.to_complex(p) * &ps.weight;
            let e = weighted.entry(*n).or_insert_with(|| Complex::zero(p));
            *e = &*e + &v;
        }
        let dw = &ps.diagonal.to_complex(p) * &ps.weight;
        if ps.diagonal_count > 0 && cfg.policy == DiagonalPolicy::Regularize {
            let rho = rho_diagonal(cfg.idx, &p1.tau(p))?;
            diagonal = &diagonal + &dw.scale(&rho);
        }
        diagonal_weights.push(dw);
        pairs.push((c1, c2));
    }
    let mut terms = Vec::new();
    for (n, w) in &weighted {
        let x = Rational::from(1) + Rational::from((2 * n * cfg.level as u64, m as u64 * disc.d.unsigned_abs()));
        let g = -q.eval_rational(&x, p)?;
        terms.push((*n, w.scale(&g)));
    }
    let off = finish(cfg, terms)?;
    let off_diagonal = off.value.clone();
    let mut eval = off;
    eval.value = &eval.value + &diagonal;
    Ok(GammaReport { eval, off_diagonal, diagonal, weighted_shells: weighted, diagonal_weights, pairs })
}

/// |S| (4 m |D|)^{k-t-1} / (D^t binom(2k-2, k-t-1)) with |S| = 1.
pub fn height_prefactor(idx: JacobiIndex, m: u64, d: i64) -> Rational {
    let e = idx.n();
    let num = Integer::from(4 * m * d.unsigned_abs()).pow(e);
    let den = Integer::from(d).pow(idx.t) * binomial(2 * idx.k as u64 - 2, e as u64);
    Rational::from((num, den))
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    /// Prefactor times gamma^m(A).
    pub lhs: Complex,
    /// Prefactor times the Q-series plus constants.
    pub rhs: Complex,
    pub residual: f64,
    /// Largest |W_n - u^2 sigma(n) r(m|D| + nN)| over shells, relative to the shell size.
    pub shell_mismatch: f64,
    pub lhs_tail: f64,
    pub rhs_tail: f64,
    pub shells: usize,
}

/// Compare the lattice side with the Q-series side of the archimedean height.
pub fn identity_residual(cfg: &GreenConfig, chi: &HeckeChar, m: i64, cls: usize) -> Result<IdentityReport> {
    let disc = &chi.disc;
    let p = cfg.prec;
    let gm = gamma_m(cfg, chi, m, cls)?;
    // the Q-series side pairs sigma_{conj A} with r_{A, chi}
    let fp = FourierParams::new(cfg.idx, cfg.level, cfg.beta, chi.clone(), disc.conj_class(cls), cfg.n_max)?;
    let eng = FourierEngine::new(fp, m as u64)?;
    let arch = eng.a_inf_detailed(m as u64)?;
    let u = disc.u;
    let mpow = Float::with_val(p, Integer::from(m).pow(cfg.idx.n()));
    let u2 = Float::with_val(p, u * u);
    // bracket = u^2 * a_inf / m^{k-t-1}
    let bracket = arch.eval.value.scale(&(u2.clone() / &mpow));
    let pre = Float::with_val(p, &height_prefactor(cfg.idx, m as u64, disc.d));
    let lhs = gm.eval.value.scale(&pre);
    let rhs = bracket.scale(&pre);
    let scale = rhs.abs().to_f64().max(lhs.abs().to_f64()).max(f64::MIN_POSITIVE);
    let residual = (&lhs - &rhs).abs().to_f64() / scale;
    let mut mismatch: f64 = 0.0;
    let mut shells = 0;
    for n in 1..=cfg.n_max {
        let want = eng.arch_series_term(m as u64, n)?;
        let w = gm.weighted_shells.get(&n).cloned().unwrap_or_else(|| Complex::zero(p));
        let x = Rational::from(1) + Rational::from((2 * n * cfg.level as u64, m as u64 * disc.d.unsigned_abs()));
        let qv = QKernel::new(cfg.idx).eval_rational(&x, p)?;
        // eng term = m^{k-t-1} sigma r Q; shell identity W_n = u^2 sigma r
        let want_w = want.scale(&(u2.clone() / (qv * &mpow)));
        let diff = (&w - &want_w).abs().to_f64();
        let size = want_w.abs().to_f64().max(1.0);
        mismatch = mismatch.max(diff / size);
        if w.abs() != 0 {
            shells += 1;
        }
    }
    let prea = pre.to_f64().abs();
    Ok(IdentityReport {
        lhs,
        rhs,
        residual,
        shell_mismatch: mismatch,
        lhs_tail: gm.eval.tail * prea,
        rhs_tail: arch.eval.tail * prea * u2.to_f64() / mpow.to_f64(),
        shells,
    })
}

/// Both sides of the algebraicity identity for a relation lambda.
#[derive(Clone, Debug)]
pub struct AlgebraicityReport {
    pub lambda: Vec<(u64, Integer)>,
    /// sum_m lambda_m m^{k-t-1} gamma^m(A), with the prefactor.
    pub lhs: Complex,
    pub lhs_tail: f64,
    /// The same quantity as an exact combination of log p.
    pub rhs: PrimeLogs,
    pub rhs_value: Float,
    pub residual: f64,
    /// Tail bound plus working-precision slack.
    pub tolerance: f64,
}

impl AlgebraicityReport {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Evaluate the Green's-function combination for lambda and compare it with the
/// exact finite-part assembly -u^2 (4|D|)^{k-t-1} / (D^t binom) sum lambda_m a_fin(m).
pub fn algebraicity(cfg: &GreenConfig, chi: &HeckeChar, cls: usize, lambda: &[(u64, Integer)]) -> Result<AlgebraicityReport> {
    let disc = &chi.disc;
    let p = cfg.prec;
    let m_max = lambda.iter().map(|(m, _)| *m).max().unwrap_or(1);
    let fp = FourierParams::new(cfg.idx, cfg.level, cfg.beta, chi.clone(), disc.conj_class(cls), 1)?;
    let eng = FourierEngine::new(fp, m_max)?;
    let mut lhs = Complex::zero(p);
    let mut lhs_tail = 0.0;
    let mut fin = PrimeLogs::zero();
    for (m, l) in lambda {
        if *l == 0 {
            continue;
        }
        let g = gamma_m(cfg, chi, *m as i64, cls)?;
        let pre = Float::with_val(p, &height_prefactor(cfg.idx, *m, disc.d));
        let lf = Float::with_val(p, l);
        lhs = &lhs + &g.eval.value.scale(&Float::with_val(p, &pre * &lf));
        lhs_tail += g.eval.tail * (pre * lf).to_f64().abs();
        fin.add(&eng.a_fin_exact(*m)?.scaled(&Rational::from(l)));
    }
    let u = disc.u as i64;
    let c = -height_prefactor(cfg.idx, 1, disc.d) * Rational::from(u * u);
    let rhs = fin.scaled(&c);
    let rhs_value = rhs.eval(p);
    let diff = Float::with_val(p, &lhs.re - &rhs_value).abs().to_f64().hypot(lhs.im.to_f64());
    let scale = rhs_value.to_f64().abs().max(lhs.abs().to_f64());
    let tolerance = lhs_tail + scale * 2f64.powi(-(p as i32) / 2);
    Ok(AlgebraicityReport { lambda: lambda.to_vec(), lhs, lhs_tail, rhs, rhs_value, residual: diff, tolerance })
}
