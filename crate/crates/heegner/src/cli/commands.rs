//! One function per subcommand, each building a [`Table`].

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use super::cache::{Cache, Lookup};
use super::table::{Check, Table};
use super::{Command, RunConfig};
use crate::arithsums::SigmaContext;
use crate::dirichlet::lprime_over_l_1;
use crate::error::{Error, Result};
use crate::fourier::{admissible_support, dim_cusp_forms, find_relation, FourierEngine, FourierParams, RelationCondition};
use crate::green::{algebraicity, identity_residual, rho_diagonal, GreenConfig};
use crate::heckechar::{AlgValue, HeckeChar, ThetaTable};
use crate::lseries::{central_derivative, fe_residual, ingest_eigenform, lambda_completed, rs_coefficients, Eigenform};
use crate::quadfield::Disc;
use crate::special::jacobi::{digamma_int, psi_pair, q_kt_oracle, JacobiIndex, QKernel, QRoute};
use crate::special::kernel::harmonicity_residual;
use crate::special::num::{pi, to_decimal, Complex, Evaluation};

/// (k, t) grid and sample points of the special-function suite.
pub const SPECIAL_GRID: [(u32, u32); 5] = [(2, 0), (2, 1), (3, 1), (3, 2), (4, 2)];
pub const SPECIAL_XS: [f64; 5] = [1.01, 1.5, 3.0, 10.0, 100.0];
pub const EDGE_EPS: [f64; 3] = [1e-2, 1e-3, 1e-4];
const HARMONICITY_SEED: u64 = 0x4845_4547;

pub fn dispatch(command: Command, c: &RunConfig) -> Result<Table> {
    match command {
        Command::SpecialSuite => special_suite(c),
        Command::Classgroup => classgroup(c),
        Command::Theta => theta(c),
        Command::SigmaTable => sigma_table(c),
        Command::FourierTable => fourier_table(c),
        Command::GreenIdentity => green_identity(c),
        Command::Chowla => chowla(c),
        Command::Algebraicity => algebraicity_cmd(c),
        Command::Lseries => lseries(c),
    }
}

fn e(x: f64) -> String {
    format!("{x:e}")
}

fn classes(c: &RunConfig, disc: &Disc) -> Result<Vec<usize>> {
    match c.cls {
        Some(k) if k < disc.h() => Ok(vec![k]),
        Some(k) => Err(Error::Config(format!("class {k} out of range, h = {}", disc.h()))),
        None => Ok((0..disc.h()).collect()),
    }
}

fn rel(a: &Float, b: &Float) -> f64 {
    let d = Float::with_val(a.prec(), a - b).abs();
    let s = Float::with_val(a.prec(), b.abs_ref()).max(&Float::with_val(a.prec(), 1e-300));
    (d / s).to_f64()
}

fn hecke(c: &RunConfig) -> Result<(Disc, HeckeChar)> {
    let disc = Disc::new(c.d)?;
    let chi = HeckeChar::new(&disc, c.t, c.branch, c.prec)?;
    Ok((disc, chi))
}

fn eigenform(c: &RunConfig) -> Result<Eigenform> {
    let path = c.eigenform.as_ref().ok_or_else(|| Error::Config("this command needs --eigenform".into()))?;
    ingest_eigenform(path, 2 * c.k, c.level as u64)
}

fn special_suite(c: &RunConfig) -> Result<Table> {
    let p = c.prec;
    let mut t = Table::new(&["test", "k", "t", "point", "value"]);
    let (mut routes, mut ode) = (0f64, 0f64);
    for (k, tt) in SPECIAL_GRID {
        let idx = JacobiIndex::new(k, tt)?;
        let q = QKernel::new(idx);
        for xv in SPECIAL_XS {
            let x = Float::with_val(p, xv);
            let closed = q.eval(&x)?;
            let a = rel(&closed, &q_kt_oracle(idx, &x, QRoute::Quadrature)?);
            let b = rel(&closed, &q_kt_oracle(idx, &x, QRoute::Hypergeometric)?);
            let scale = Float::with_val(p, closed.abs_ref()).max(&Float::with_val(p, 1));
            let r = (q.ode_residual(&x)?.abs() / scale).to_f64();
            routes = routes.max(a).max(b);
            ode = ode.max(r);
            for (name, v) in [("quadrature", a), ("hypergeometric", b), ("ode", r)] {
                t.push(vec![name.into(), k.to_string(), tt.to_string(), xv.to_string(), e(v)]);
            }
        }
    }
    t.check(Check::at_most("route agreement", routes, c.tolerance.unwrap_or(1e-25)));
    t.check(Check::at_most("ode residual", ode, 1e-20));

    // |Q(1+eps) - log((2+eps)/eps) + psi(k+t) + psi(k-t) - 2 psi(1)|
    let (mut worst_mid, mut monotone) = (0f64, true);
    for (k, tt) in SPECIAL_GRID {
        let idx = JacobiIndex::new(k, tt)?;
        let q = QKernel::new(idx);
        let psi = Float::with_val(p, &psi_pair(idx));
        let mut errs = Vec::new();
        for eps in EDGE_EPS {
            let x = Float::with_val(p, 1) + Float::with_val(p, eps);
            let lg = (Float::with_val(p, 2.0 + eps) / Float::with_val(p, eps)).ln();
            let err = (q.eval(&x)? - lg + &psi).abs().to_f64();
            t.push(vec!["edge".into(), k.to_string(), tt.to_string(), eps.to_string(), e(err)]);
            errs.push(err);
        }
        monotone &= errs.windows(2).all(|w| w[0] > w[1]);
        worst_mid = worst_mid.max(errs[1]);
    }
    t.check(Check::at_most("edge asymptote decreasing", if monotone { 0.0 } else { 1.0 }, 0.0));
    t.check(Check::at_most("edge asymptote at 1e-3", worst_mid, 1e-2));

    let idx = JacobiIndex::new(c.k, c.t)?;
    let mut rng = StdRng::seed_from_u64(HARMONICITY_SEED);
    let mut harm = 0f64;
    for i in 0..5 {
        let z = Complex::from_f64(p, rng.gen_range(-0.5..0.5), rng.gen_range(0.6..2.0));
        let w = Complex::from_f64(p, rng.gen_range(0.6..1.5), rng.gen_range(0.6..2.0));
        for sign in [1, -1] {
            let r = harmonicity_residual(idx, sign, &z, &w, 1e-4)?;
            harm = harm.max(r.residual);
            let label = format!("pair {i} sign {sign:+}");
            t.push(vec!["harmonicity".into(), c.k.to_string(), c.t.to_string(), label, e(r.residual)]);
        }
    }
    t.check(Check::at_most("harmonicity", harm, 1e-6));
    Ok(t)
}

fn classgroup(c: &RunConfig) -> Result<Table> {
    let disc = Disc::new(c.d)?;
    let beta = c.beta()?;
    let mut t = Table::new(&["cls", "form", "A", "B", "C", "tau_re", "tau_im"]);
    t.meta("h", disc.h());
    t.meta("u", disc.u);
    t.meta("beta", beta);
    for cls in classes(c, &disc)? {
        let hp = disc.heegner_point(c.level, beta, cls)?;
        let tau = hp.tau(c.prec);
        t.push(vec![
            cls.to_string(),
            disc.cg.forms[cls].to_string(),
            hp.a.to_string(),
            hp.b.to_string(),
            hp.c.to_string(),
            to_decimal(&tau.re),
            to_decimal(&tau.im),
        ]);
    }
    Ok(t)
}

fn theta(c: &RunConfig) -> Result<Table> {
    let (disc, chi) = hecke(c)?;
    let p = c.prec;
    let tables: Vec<ThetaTable> = (0..disc.h()).map(|cls| ThetaTable::new(&chi, cls, c.upto)).collect::<Result<_>>()?;
    let mut t = Table::new(&["n", "cls", "re", "im", "exact"]);
    for cls in classes(c, &disc)? {
        for n in 1..=c.upto {
            let v = tables[cls].r_complex(n, p);
            let exact = match tables[cls].r(n) {
                AlgValue::Exact(k) => k.to_string(),
                _ => String::new(),
            };
            t.push(vec![n.to_string(), cls.to_string(), to_decimal(&v.re), to_decimal(&v.im), exact]);
        }
    }
    // partition: sum over classes equals the full theta coefficient
    let mut partition = 0f64;
    for n in 1..=c.upto {
        let mut full = Complex::zero(p);
        for (a, _) in disc.ideals_of_norm(n) {
            full = &full + &chi.eval(&a).to_complex(p);
        }
        let full = full.scale(&Float::with_val(p, disc.u).recip());
        let mut parts = Complex::zero(p);
        for tb in &tables {
            parts = &parts + &tb.r_complex(n, p);
        }
        partition = partition.max((&full - &parts).abs().to_f64() / full.abs().to_f64().max(1.0));
    }
    // r(n |D|) = D^t r(n)
    let mut scaling = 0f64;
    let dt = Float::with_val(p, rug::Integer::from(c.d).pow(c.t));
    let ad = c.d.unsigned_abs();
    for tb in &tables {
        for n in (1..=c.upto).take_while(|n| n * ad <= c.upto) {
            let lhs = tb.r_complex(n * ad, p);
            let rhs = tb.r_complex(n, p).scale(&dt);
            scaling = scaling.max((&lhs - &rhs).abs().to_f64() / rhs.abs().to_f64().max(1.0));
        }
    }
    let tol = c.tolerance.unwrap_or(f64::from(2).powi(-(p as i32) / 2));
    t.check(Check::at_most("class partition", partition, tol));
    t.check(Check::at_most("scaling by D^t", scaling, tol));
    Ok(t)
}

fn sigma_table(c: &RunConfig) -> Result<Table> {
    let disc = Disc::new(c.d)?;
    let beta = c.beta()?;
    let mut t = Table::new(&["n", "cls", "sigma", "sigma_prime", "sigma_prime_value"]);
    for cls in classes(c, &disc)? {
        let ctx = SigmaContext::new(&disc, c.level, beta, cls)?;
        for n in 1..=c.upto {
            let sp = ctx.sigma_prime(n);
            t.push(vec![
                n.to_string(),
                cls.to_string(),
                ctx.sigma(n).to_string(),
                sp.to_string(),
                to_decimal(&sp.eval(c.prec)),
            ]);
        }
    }
    Ok(t)
}

#[derive(Serialize)]
struct FourierKey {
    k: u32,
    t: u32,
    level: i64,
    d: i64,
    beta: i64,
    branch: usize,
    cls: usize,
    m: u64,
}

fn fourier_table(c: &RunConfig) -> Result<Table> {
    let (disc, chi) = hecke(c)?;
    let beta = c.beta()?;
    let idx = JacobiIndex::new(c.k, c.t)?;
    let ms: Vec<u64> = c.m_values().into_iter().filter(|m| *m >= 1).collect();
    let (good, skipped): (Vec<u64>, Vec<u64>) = ms.iter().partition(|&&m| crate::quadfield::gcd(m as i64, c.level) == 1);
    let cache = (!c.no_cache).then(|| Cache::resolve(c.cache_dir.as_deref()));
    let m_max = good.iter().copied().max().unwrap_or(1);
    let mut t = Table::new(&["m", "cls", "re", "im", "truncation", "tail", "tail_kind"]);
    if !skipped.is_empty() {
        t.meta("skipped_m", format!("{skipped:?} (not coprime to N)"));
    }
    for cls in classes(c, &disc)? {
        let mut engine: Option<FourierEngine> = None;
        for &m in &good {
            let mut compute = || -> Result<Evaluation> {
                if engine.is_none() {
                    let fp = FourierParams::new(idx, c.level, beta, chi.clone(), cls, c.n0)?;
                    engine = Some(FourierEngine::new(fp, m_max)?);
                }
                engine.as_ref().expect("engine built").a_m(m)
            };
            let ev = match &cache {
                Some(cache) => {
                    let key = Cache::key(
                        "fourier-table",
                        &FourierKey { k: c.k, t: c.t, level: c.level, d: c.d, beta, branch: c.branch, cls, m },
                    )?;
                    let (ev, how) = cache.get_or_compute(&key, c.prec, c.n0, compute)?;
                    if how != Lookup::Hit {
                        eprintln!("cache {how:?}: m = {m}, class {cls}");
                    }
                    ev
                }
                None => compute()?,
            };
            t.push(vec![
                m.to_string(),
                cls.to_string(),
                to_decimal(&ev.value.re),
                to_decimal(&ev.value.im),
                ev.truncation.to_string(),
                e(ev.tail),
                format!("{:?}", ev.tail_kind),
            ]);
        }
    }
    Ok(t)
}

fn green_identity(c: &RunConfig) -> Result<Table> {
    let (disc, chi) = hecke(c)?;
    let beta = c.beta()?;
    let cfg = GreenConfig::new(JacobiIndex::new(c.k, c.t)?, c.level, beta, c.n_max, c.prec)?;
    let mut t = Table::new(&[
        "m", "cls", "diagonal", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "shell_mismatch", "lhs_tail", "rhs_tail", "shells",
    ]);
    for m in c.m_values() {
        let diagonal = !disc.ideals_of_norm(m).is_empty();
        let tol = c.tolerance.unwrap_or(if diagonal { 1e-3 } else { 1e-4 });
        for cls in classes(c, &disc)? {
            let r = identity_residual(&cfg, &chi, m as i64, cls)?;
            t.push(vec![
                m.to_string(),
                cls.to_string(),
                diagonal.to_string(),
                to_decimal(&r.lhs.re),
                to_decimal(&r.lhs.im),
                to_decimal(&r.rhs.re),
                to_decimal(&r.rhs.im),
                e(r.residual),
                e(r.shell_mismatch),
                e(r.lhs_tail),
                e(r.rhs_tail),
                r.shells.to_string(),
            ]);
            t.check(Check::at_most(format!("residual m={m} cls={cls}"), r.residual, tol));
        }
    }
    Ok(t)
}

fn chowla(c: &RunConfig) -> Result<Table> {
    let disc = Disc::new(c.d)?;
    let p = c.prec;
    let idx = JacobiIndex::new(c.k, c.t)?;
    let beta = c.beta()?;
    let mut t = Table::new(&["cls", "tau_re", "tau_im", "rho"]);
    let mut sum = Float::new(p);
    for hp in disc.heegner_points(c.level, beta)? {
        let tau = hp.tau(p);
        let rho = rho_diagonal(idx, &tau)?;
        t.push(vec![hp.cls.to_string(), to_decimal(&tau.re), to_decimal(&tau.im), to_decimal(&rho)]);
        sum += &rho;
    }
    let h = disc.h() as u32;
    let dig = digamma_int(c.k + c.t, p) + digamma_int(c.k - c.t, p);
    let two_pi = Float::with_val(p, pi(p) * 2u32);
    let lpl = lprime_over_l_1(&disc, p)?;
    let want = (dig - two_pi.ln() * 2u32 + Float::with_val(p, &lpl * 2u32) + Float::with_val(p, -c.d).ln()) * h;
    let resid = (Float::with_val(p, &sum - &want).abs() / h).to_f64();
    t.meta("class_sum", to_decimal(&sum));
    t.meta("prediction", to_decimal(&want));
    t.meta("lprime_over_l", to_decimal(&lpl));
    t.check(Check::at_most("class sum residual / h", resid, c.tolerance.unwrap_or(1e-8)));
    Ok(t)
}

fn algebraicity_cmd(c: &RunConfig) -> Result<Table> {
    let (_, chi) = hecke(c)?;
    let beta = c.beta()?;
    let cls = c.cls.unwrap_or(0);
    let weight = 2 * c.k;
    let dim = dim_cusp_forms(weight, c.level as u64);
    let cands = if c.m.is_empty() { (1..=20).collect() } else { c.m.clone() };
    let theta = ThetaTable::new(&chi, cls, cands.iter().copied().max().unwrap_or(1))?;
    let sup = admissible_support(&cands, c.level, &theta, RelationCondition::CoprimeDiagonalFree);
    let need = dim as usize + 1;
    if sup.len() < need {
        return Err(Error::NoRelation);
    }
    let sup = &sup[..need];
    let rows = match dim {
        0 => Vec::new(),
        1 => {
            let f = eigenform(c)?;
            vec![sup.iter().map(|&m| Rational::from(f.a(m))).collect()]
        }
        _ => return Err(Error::Config(format!("dim S_{weight} = {dim}; only dimensions 0 and 1 are supported"))),
    };
    let lambda = find_relation(&rows, sup)?;
    let cfg = GreenConfig::new(JacobiIndex::new(c.k, c.t)?, c.level, beta, c.n_max, c.prec)?;
    let r = algebraicity(&cfg, &chi, cls, &lambda)?;
    let mut t = Table::new(&["m", "lambda"]);
    for (m, l) in &r.lambda {
        t.push(vec![m.to_string(), l.to_string()]);
    }
    t.meta("dim_cusp_forms", dim);
    t.meta("lhs_re", to_decimal(&r.lhs.re));
    t.meta("lhs_im", to_decimal(&r.lhs.im));
    t.meta("rhs", &r.rhs);
    t.meta("rhs_value", to_decimal(&r.rhs_value));
    t.meta("lhs_tail", e(r.lhs_tail));
    t.check(Check::at_most("algebraicity residual", r.residual, c.tolerance.unwrap_or(r.tolerance)));
    Ok(t)
}

fn lseries(c: &RunConfig) -> Result<Table> {
    let (disc, chi) = hecke(c)?;
    let f = eigenform(c)?;
    let s0 = (c.k + c.t) as f64;
    let mut t = Table::new(&["cls", "sign", "lambda_re", "lambda_im", "fe_residual", "centre_ratio", "lprime_re", "lprime_im"]);
    let mut fe_worst = 0f64;
    let mut centre_worst = 0f64;
    for cls in classes(c, &disc)? {
        let s = rs_coefficients(&f, &chi, cls, f.len())?;
        let at = lambda_completed(&s, s0 + 0.5, 1.0)?;
        let fe = fe_residual(&s, s0 + 0.5)?;
        let centre = lambda_completed(&s, s0, 1.3)?.norm() / at.norm().max(f64::MIN_POSITIVE);
        let (lr, li) = match central_derivative(&s) {
            Ok(cd) => (e(cd.value.re), e(cd.value.im)),
            Err(_) => (String::new(), String::new()),
        };
        fe_worst = fe_worst.max(fe);
        if s.sign == -1 {
            centre_worst = centre_worst.max(centre);
        }
        t.push(vec![cls.to_string(), s.sign.to_string(), e(at.re), e(at.im), e(fe), e(centre), lr, li]);
    }
    t.meta("eigenform", &f.provenance);
    t.check(Check::at_most("functional equation", fe_worst, c.tolerance.unwrap_or(1e-6)));
    t.check(Check::at_most("central value / local scale", centre_worst, 1e-6));
    Ok(t)
}
