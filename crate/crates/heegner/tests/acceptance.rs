//! Acceptance criteria, one PASS/FAIL line each. Tolerances are pinned here.
//!
//! The process exits 0 so that known, documented failures do not mask the rest
//! of the suite; set HEEGNER_ACCEPTANCE_STRICT=1 to exit 1 on any gating failure.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use heegner::dirichlet::{dual_route, lprime_over_l_1};
use heegner::fourier::{admissible_support, dim_cusp_forms, find_relation, FourierEngine, FourierParams, RelationCondition};
use heegner::green::{algebraicity, identity_residual, rho_diagonal, GreenConfig};
use heegner::heckechar::{theta_tables, HeckeChar, ThetaTable};
use heegner::lseries::{central_derivative, fe_residual, ingest_eigenform, lambda_completed, petersson_quadrature, rs_coefficients, Eigenform};
use heegner::quadfield::{reduced_forms, Disc, KNum};
use heegner::special::jacobi::{digamma_int, psi_pair, q_kt_oracle, JacobiIndex, QKernel, QRoute};
use heegner::special::kernel::harmonicity_residual;
use heegner::special::num::{pi, Complex};
use heegner::Result;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::{Float, Integer, Rational};

const P: u32 = 128;
const GRID: [(u32, u32); 5] = [(2, 0), (2, 1), (3, 1), (3, 2), (4, 2)];
const XS: [f64; 5] = [1.01, 1.5, 3.0, 10.0, 100.0];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { pass, detail })
}

fn idx(k: u32, t: u32) -> JacobiIndex {
    JacobiIndex::new(k, t).unwrap()
}

fn rel(a: &Float, b: &Float) -> f64 {
    let d = Float::with_val(P, a - b).abs();
    let s = Float::with_val(P, b.abs_ref()).max(&Float::with_val(P, 1e-300));
    (d / s).to_f64()
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn form() -> Eigenform {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/3.6.a.a.txt");
    ingest_eigenform(&p, 6, 3).unwrap()
}

/// q-expansion of eta(z)^6 eta(3z)^6 by expanding the product.
fn eta_product(upto: usize) -> Vec<i64> {
    let mut s = vec![0i64; upto + 1];
    s[0] = 1;
    for step in [1usize, 3] {
        for n in (step..=upto).step_by(step) {
            for _ in 0..6 {
                for i in (n..=upto).rev() {
                    s[i] -= s[i - n];
                }
            }
        }
    }
    let mut out = vec![0i64; upto + 1];
    out[1..=upto].copy_from_slice(&s[..upto]);
    out
}

fn c1() -> Result<Verdict> {
    let start = Instant::now();
    let mut worst = 0f64;
    for (k, t) in GRID {
        let q = QKernel::new(idx(k, t));
        for xv in XS {
            let x = Float::with_val(P, xv);
            let c = q.eval(&x)?;
            worst = worst
                .max(rel(&c, &q_kt_oracle(idx(k, t), &x, QRoute::Quadrature)?))
                .max(rel(&c, &q_kt_oracle(idx(k, t), &x, QRoute::Hypergeometric)?));
        }
    }
    let el = secs(start.elapsed());
    verdict(worst <= 1e-25 && el < 30.0, format!("max relative disagreement {worst:.2e} (<= 1e-25), {el:.2} s (< 30 s)"))
}

fn c2() -> Result<Verdict> {
    let mut worst = 0f64;
    for (k, t) in GRID {
        let q = QKernel::new(idx(k, t));
        for xv in XS {
            let x = Float::with_val(P, xv);
            let scale = Float::with_val(P, q.eval(&x)?.abs()).max(&Float::with_val(P, 1));
            worst = worst.max((q.ode_residual(&x)?.abs() / scale).to_f64());
        }
    }
    verdict(worst <= 1e-20, format!("max ODE residual {worst:.2e} (<= 1e-20)"))
}

fn c3() -> Result<Verdict> {
    let mut monotone = true;
    let mut worst = (0f64, (0, 0));
    for (k, t) in GRID {
        let q = QKernel::new(idx(k, t));
        let psi = Float::with_val(P, &psi_pair(idx(k, t)));
        let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&e| {
                let x = Float::with_val(P, 1) + Float::with_val(P, e);
                let lg = (Float::with_val(P, 2.0 + e) / Float::with_val(P, e)).ln();
                Ok((q.eval(&x)? - lg + &psi).abs().to_f64())
            })
            .collect::<Result<_>>()?;
        monotone &= errs[0] > errs[1] && errs[1] > errs[2];
        if errs[1] > worst.0 {
            worst = (errs[1], (k, t));
        }
    }
    verdict(
        monotone && worst.0 <= 1e-2,
        format!("decreasing: {monotone}; worst at eps=1e-3 is {:.3e} for {:?} (<= 1e-2)", worst.0, worst.1),
    )
}

fn c4() -> Result<Verdict> {
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst = 0f64;
    for _ in 0..5 {
        let z = Complex::from_f64(P, rng.gen_range(-0.5..0.5), rng.gen_range(0.6..2.0));
        let w = Complex::from_f64(P, rng.gen_range(0.6..1.5), rng.gen_range(0.6..2.0));
        for (k, t) in GRID {
            for sign in [1, -1] {
                worst = worst.max(harmonicity_residual(idx(k, t), sign, &z, &w, 1e-4)?.residual);
            }
        }
    }
    verdict(worst <= 1e-6, format!("max residual {worst:.2e} over 5 pairs, both signs, (k,t) grid (<= 1e-6)"))
}

fn c5() -> Result<Verdict> {
    let hs: Vec<usize> = [-11i64, -23, -15].iter().map(|&d| reduced_forms(d).len()).collect();
    let class_numbers = hs == [1, 3, 2];
    let mut partition = true;
    let mut scaling = true;
    for d in [-11i64, -23] {
        let disc = Disc::new(d)?;
        for branch in 0..disc.h() {
            let chi = HeckeChar::new(&disc, 1, branch, P)?;
            let tabs = theta_tables(&chi, 20 * d.unsigned_abs())?;
            for n in 1..=200u64 {
                let ideals = disc.ideals_of_norm(n);
                for (cls, tab) in tabs.iter().enumerate() {
                    let mine = ideals.iter().filter(|(_, c)| *c == cls);
                    match (tab.r(n).exact().cloned(), mine.clone().map(|(a, _)| chi.eval(a).exact().cloned()).collect::<Option<Vec<KNum>>>()) {
                        (Some(r), Some(vals)) => partition &= vals.iter().fold(KNum::zero(d), |s, v| s.add(v)) == r,
                        _ => {
                            let want = mine.fold(Complex::zero(P), |s, (a, _)| &s + &chi.eval(a).to_complex(P));
                            let got = tab.r_complex(n, P);
                            partition &= (&got - &want).abs().to_f64() <= 1e-30 * want.abs().to_f64().max(1.0);
                        }
                    }
                }
            }
            // the class factor is common, so the exact integer sums must scale by D^t
            for tab in &tabs {
                for m in 1..=20u64 {
                    let (x, y) = tab.raw(m);
                    scaling &= tab.raw(m * d.unsigned_abs()) == (x * d as i128, y * d as i128);
                }
            }
        }
    }
    verdict(
        class_numbers && partition && scaling,
        format!("h(-11,-23,-15) = {hs:?}; partition exact: {partition}; r(m|D|) = D^t r(m): {scaling}"),
    )
}

fn c6() -> Result<Verdict> {
    let start = Instant::now();
    let k = idx(3, 1);
    let mut worst = 0f64;
    let mut routes = 0f64;
    for d in [-11i64, -23] {
        let disc = Disc::new(d)?;
        let mut sum = Float::new(P);
        for hp in disc.heegner_points(3, 1)? {
            sum += rho_diagonal(k, &hp.tau(P))?;
        }
        let h = disc.h() as u32;
        let dig = digamma_int(4, P) + digamma_int(2, P);
        let two_pi = Float::with_val(P, pi(P) * 2u32);
        let lpl = lprime_over_l_1(&disc, P)?;
        routes = routes.max(dual_route(d, P).discrepancy());
        let want = (dig - two_pi.ln() * 2u32 + lpl * 2u32 + Float::with_val(P, -d).ln()) * h;
        worst = worst.max((Float::with_val(P, sum - want).abs() / h).to_f64());
    }
    let el = secs(start.elapsed());
    verdict(
        worst <= 1e-8 && el < 60.0,
        format!("max |sum rho - prediction| / h = {worst:.2e} (<= 1e-8); L'/L routes differ by {routes:.1e}; {el:.2} s (< 60 s)"),
    )
}

fn identity(ms: &[i64], tol: f64, label: &str) -> Result<Verdict> {
    let start = Instant::now();
    let disc = Disc::new(-11)?;
    let chi = HeckeChar::new(&disc, 1, 0, P)?;
    let cfg = GreenConfig::new(idx(3, 1), 3, 1, 10_000, P)?;
    let mut worst = 0f64;
    let mut parts = Vec::new();
    for &m in ms {
        let r = identity_residual(&cfg, &chi, m, 0)?;
        worst = worst.max(r.residual).max(r.shell_mismatch);
        parts.push(format!("m={m}: {:.2e} (lattice tail {:.1e})", r.residual, r.lhs_tail));
    }
    let el = secs(start.elapsed());
    verdict(worst <= tol && el <= 600.0, format!("{label}, n_max 1e4: {} (<= {tol:e}); {el:.1} s", parts.join(", ")))
}

fn c7() -> Result<Verdict> {
    identity(&[2], 1e-4, "diagonal-free")
}

fn c8() -> Result<Verdict> {
    let disc = Disc::new(-11)?;
    let diag = [1u64, 5].iter().all(|&m| !disc.ideals_of_norm(m).is_empty());
    let v = identity(&[1, 5], 1e-3, "regularised diagonal")?;
    verdict(v.pass && diag, v.detail)
}

fn engine(k: u32, n0: u64, m_max: u64, cls: usize, chi: &HeckeChar) -> Result<FourierEngine> {
    FourierEngine::new(FourierParams::new(idx(k, 1), 3, 1, chi.clone(), cls, n0)?, m_max)
}

fn c9() -> Result<Verdict> {
    let f = form();
    let oracle = eta_product(200);
    let ingest_ok = (1..=200).all(|n| f.a(n) == oracle[n as usize]);
    let dim = dim_cusp_forms(6, 3);
    let disc = Disc::new(-11)?;
    let chi = HeckeChar::new(&disc, 1, 0, P)?;
    let e = engine(3, 20_000, 7, 0, &chi)?;
    let ms = [2u64, 4, 5, 7];
    let a: Vec<f64> = ms.iter().map(|&m| Ok(e.a_m(m)?.real().to_f64())).collect::<Result<_>>()?;
    let mut worst = 0f64;
    for i in 0..4 {
        for j in i + 1..4 {
            let x = a[i] * f.a(ms[j]) as f64;
            let y = a[j] * f.a(ms[i]) as f64;
            worst = worst.max((x - y).abs() / x.abs().max(y.abs()));
        }
    }
    verdict(
        worst <= 1e-3 && dim == 1 && ingest_ok,
        format!("dim S_6(3) = {dim}; ingested = eta product: {ingest_ok}; max relative cross-ratio {worst:.2e} (<= 1e-3)"),
    )
}

fn c10() -> Result<Verdict> {
    let start = Instant::now();
    let disc = Disc::new(-11)?;
    let chi = HeckeChar::new(&disc, 1, 0, P)?;
    let e = engine(2, 1_000_000, 2, 0, &chi)?;
    let d = e.a_inf_detailed(2)?;
    let a2 = e.a_m(2)?;
    let v = a2.value.abs().to_f64();
    let el = secs(start.elapsed());
    verdict(
        v <= 1e-2 * d.max_term && dim_cusp_forms(4, 3) == 0,
        format!(
            "|a_2| = {v:.2e}, max term {:.2e}, ratio {:.2e} (<= 1e-2); N0 = 1e6 tail bound {:.2e} (N0^-1/2 decay); {el:.1} s",
            d.max_term,
            v / d.max_term,
            a2.tail
        ),
    )
}

fn c11() -> Result<Verdict> {
    let f = form();
    let disc = Disc::new(-11)?;
    let chi = HeckeChar::new(&disc, 1, 0, P)?;
    let theta = ThetaTable::new(&chi, 0, 20)?;
    let cands: Vec<u64> = (1..=20).collect();
    let sup = admissible_support(&cands, 3, &theta, RelationCondition::CoprimeDiagonalFree);
    let rows = vec![sup[..2].iter().map(|&m| Rational::from(f.a(m))).collect::<Vec<_>>()];
    let lambda = find_relation(&rows, &sup[..2])?;
    let cfg = GreenConfig::new(idx(3, 1), 3, 1, 10_000, P)?;
    let r = algebraicity(&cfg, &chi, 0, &lambda)?;
    let lam: Vec<String> = r.lambda.iter().map(|(m, l)| format!("{l}@{m}")).collect();
    verdict(
        r.passed() && !r.rhs.is_zero() && r.lambda.iter().any(|(_, l)| *l != Integer::ZERO),
        format!(
            "lambda [{}]: LHS {:.10} vs RHS {} = {:.10}; residual {:.2e} (<= {:.2e})",
            lam.join(", "),
            r.lhs.re.to_f64(),
            r.rhs,
            r.rhs_value.to_f64(),
            r.residual,
            r.tolerance
        ),
    )
}

fn c12() -> Result<Verdict> {
    let f = form();
    let disc = Disc::new(-11)?;
    let chi = HeckeChar::new(&disc, 1, 0, P)?;
    let s = rs_coefficients(&f, &chi, 0, 3000)?;
    let fe = fe_residual(&s, 4.5)?;
    let centre = lambda_completed(&s, 4.0, 1.3)?.norm();
    let scale = lambda_completed(&s, 4.5, 1.0)?.norm();
    verdict(
        fe <= 1e-6 && centre <= 1e-6 * scale && s.sign == -1,
        format!("root number {}; FE residual at 4.5 {fe:.2e} (<= 1e-6); |Lambda(4)| / |Lambda(4.5)| = {:.2e} (<= 1e-6)", s.sign, centre / scale),
    )
}

fn c13() -> Result<Verdict> {
    let f = form();
    let pf = petersson_quadrature(&f, 32)?;
    let (k, t) = (3i32, 1i32);
    let mut worst = 0f64;
    let mut shown = String::new();
    for d in [-11i64, -23] {
        let disc = Disc::new(d)?;
        for branch in 0..disc.h() {
            let chi = HeckeChar::new(&disc, t as u32, branch, P)?;
            for cls in 0..disc.h() {
                let a2 = engine(3, 40_000, 2, cls, &chi)?.a_m(2)?;
                let c = num_complex::Complex64::new(a2.value.re.to_f64(), a2.value.im.to_f64()) / f.a(2) as f64;
                let lp = central_derivative(&rs_coefficients(&f, &chi, cls, 3000)?)?.value;
                // 2^{4k-1} pi^{2k} / ((2k-2)! sqrt|D| D^t)
                let fact: f64 = (1..=(2 * k - 2)).map(f64::from).product();
                let kfac = 2f64.powi(4 * k - 1) * std::f64::consts::PI.powi(2 * k)
                    / (fact * (d.unsigned_abs() as f64).sqrt() * (d as f64).powi(t));
                let pred = c.conj() * (kfac * pf.value);
                let r = (lp - pred).norm() / pred.norm().max(lp.norm());
                worst = worst.max(r);
                if d == -11 {
                    shown = format!("D=-11: L' = {:.10}, prediction {:.10}", lp.re, pred.re);
                }
            }
        }
    }
    verdict(worst <= 1e-2, format!("{shown}; (f,f) = {:.6e}; max relative gap over D=-11,-23 classes {worst:.2e} (<= 1e-2)", pf.value))
}

fn main() {
    type Criterion = (u32, bool, fn() -> Result<Verdict>);
    let criteria: [Criterion; 13] = [
        (1, true, c1),
        (2, true, c2),
        (3, true, c3),
        (4, true, c4),
        (5, true, c5),
        (6, true, c6),
        (7, true, c7),
        (8, true, c8),
        (9, true, c9),
        (10, true, c10),
        (11, true, c11),
        (12, true, c12),
        (13, false, c13),
    ];
    let mut failed = Vec::new();
    for (id, gating, f) in criteria {
        let v = f().unwrap_or_else(|e| Verdict { pass: false, detail: format!("error: {e}") });
        let tag = if v.pass { "PASS" } else { "FAIL" };
        let kind = if gating { "" } else { " (stretch, non-gating)" };
        println!("criterion {id:>2}: {tag}{kind}  {}", v.detail);
        if gating && !v.pass {
            failed.push(id);
        }
    }
    println!("gating failures: {failed:?}");
    if !failed.is_empty() && std::env::var_os("HEEGNER_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
