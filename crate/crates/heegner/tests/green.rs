use heegner::green::*;
use heegner::heckechar::{HeckeChar, ThetaTable};
use rug::ops::Pow;
use heegner::quadfield::{Disc, HeegnerPoint};
use heegner::special::jacobi::{psi_pair, JacobiIndex, QKernel};
use heegner::special::num::Complex;
use rug::{Float, Rational};

const P: u32 = 128;

fn idx(k: u32, t: u32) -> JacobiIndex {
    JacobiIndex::new(k, t).unwrap()
}

fn cplx(x: f64, y: f64) -> Complex {
    Complex::from_f64(P, x, y)
}

/// n for every gamma in a box, from the hyperbolic distance in floating point.
fn brute_shells(m: i64, p1: &HeegnerPoint, p2: &HeegnerPoint, n_max: u64, bound: i64) -> Vec<(u64, LatticeMatrix)> {
    let (t1, t2) = (p1.tau(P), p2.tau(P));
    let dd = (-p1.d) as f64;
    let mut out = Vec::new();
    for c in (0..=bound).step_by(p1.level as usize) {
        for d in -bound..=bound {
            if c == 0 && d <= 0 {
                continue;
            }
            for a in -bound..=bound {
                let rest = a * d - m;
                if c == 0 {
                    if rest != 0 {
                        continue;
                    }
                    for b in -bound..=bound {
                        push(&mut out, m, LatticeMatrix { a, b, c, d }, &t1, &t2, dd, p1.level, n_max);
                    }
                } else if rest % c == 0 {
                    let b = rest / c;
                    push(&mut out, m, LatticeMatrix { a, b, c, d }, &t1, &t2, dd, p1.level, n_max);
                }
            }
        }
    }
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn push(out: &mut Vec<(u64, LatticeMatrix)>, m: i64, g: LatticeMatrix, t1: &Complex, t2: &Complex, dd: f64, level: i64, n_max: u64) {
    let w = g.apply(t2);
    let ch = match heegner::special::kernel::cosh_distance(t1, &w) {
        Ok(c) => c.to_f64(),
        Err(_) => 1.0,
    };
    let n = (ch - 1.0) * m as f64 * dd / (2.0 * level as f64);
    let r = n.round();
    if r <= n_max as f64 {
        assert!((n - r).abs() < 1e-6, "non-integral shell {n}");
        out.push((r as u64, g));
    }
}

#[test]
fn kernel_values_and_invariance() {
    let q = QKernel::new(idx(3, 1));
    let g = g_kt(idx(3, 1), &cplx(0.0, 1.0), &cplx(0.0, 2.0)).unwrap();
    let want = -q.eval_rational(&Rational::from((5, 4)), P).unwrap();
    assert!(Float::with_val(P, &g - &want).abs() < 1e-30);
    let (z, w) = (cplx(0.3, 0.7), cplx(-1.1, 2.4));
    let a = g_kt(idx(4, 2), &z, &w).unwrap();
    let b = g_kt(idx(4, 2), &w, &z).unwrap();
    assert!(Float::with_val(P, &a - &b).abs() < 1e-30);
    // gamma = (2 1; 5 3) in SL2(Z)
    let s = LatticeMatrix { a: 2, b: 1, c: 5, d: 3 };
    let c = g_kt(idx(4, 2), &s.apply(&z), &s.apply(&w)).unwrap();
    assert!(Float::with_val(P, &a - &c).abs() < 1e-28);
}

#[test]
fn enumeration_matches_brute_force() {
    for (dval, m, n_max) in [(-11i64, 1i64, 12u64), (-11, 2, 10), (-23, 1, 8), (-23, 5, 6), (-11, 4, 6)] {
        let disc = Disc::new(dval).unwrap();
        let pts = disc.heegner_points(3, 1).unwrap();
        for p1 in &pts {
            for p2 in &pts {
                let sh = enumerate_rnm(m, p1, p2, n_max).unwrap();
                let mut fast: Vec<(u64, LatticeMatrix)> = sh.diagonal.iter().chain(sh.by_shell.values().flatten()).map(|s| (s.n, s.gamma)).collect();
                fast.sort();
                let slow = brute_shells(m, p1, p2, n_max, 40);
                assert_eq!(fast, slow, "D={dval} m={m} {p1} {p2}");
                // the box is not binding
                assert!(fast.iter().all(|(_, g)| [g.a, g.b, g.c, g.d].iter().all(|x| x.abs() < 30)));
            }
        }
    }
}

#[test]
fn diagonal_counts() {
    for dval in [-11i64, -23, -47] {
        let disc = Disc::new(dval).unwrap();
        let pts = disc.heegner_points(3, 1).unwrap();
        for m in [1i64, 2, 4, 5, 7, 8, 10, 16] {
            let ideals = disc.ideals_of_norm(m as u64);
            for p1 in &pts {
                for p2 in &pts {
                    let sh = enumerate_rnm(m, p1, p2, 1).unwrap();
                    let rel = disc.class_of(&p1.ideal().conj().mul(&p2.ideal()));
                    let want = ideals.iter().filter(|(_, c)| disc.conj_class(*c) == rel).count();
                    assert_eq!(sh.diagonal.len(), disc.u as usize * want, "D={dval} m={m}");
                }
            }
        }
    }
    // 2 is inert for D = -11: no diagonal at m = 2
    let disc = Disc::new(-11).unwrap();
    let p = disc.heegner_point(3, 1, 0).unwrap();
    assert!(enumerate_rnm(2, &p, &p, 5).unwrap().diagonal.is_empty());
    assert!(enumerate_rnm(3, &p, &p, 5).is_err());
}

#[test]
fn diagonal_weights() {
    for (dval, t) in [(-11i64, 1u32), (-23, 1), (-23, 2), (-47, 1)] {
        let disc = Disc::new(dval).unwrap();
        for branch in 0..disc.h() {
            let chi = HeckeChar::new(&disc, t, branch, P).unwrap();
            let cfg = GreenConfig::new(idx(t + 2, t), 3, 1, 2, P).unwrap();
            for cls in 0..disc.h() {
                let theta = ThetaTable::new(&chi, cls, 20).unwrap();
                for m in [1i64, 4, 5, 7] {
                    let g = gamma_m(&cfg, &chi, m, cls).unwrap();
                    let dt = Float::with_val(P, rug::Integer::from(dval).pow(t));
                    let want = theta.r_complex(m as u64, P).scale(&(dt * disc.u));
                    for w in &g.diagonal_weights {
                        assert!((w - &want).abs() < 1e-28, "D={dval} t={t} m={m}");
                    }
                }
            }
        }
    }
}

#[test]
fn regularised_diagonal_limit() {
    let k = idx(3, 1);
    let disc = Disc::new(-23).unwrap();
    for p in disc.heegner_points(3, 1).unwrap() {
        let z = p.tau(P);
        let rho = rho_diagonal(k, &z).unwrap();
        let mut last = f64::INFINITY;
        for e in [1e-2, 1e-3, 1e-4] {
            let eps = Complex::from_f64(P, e * 0.6, e * 0.8);
            let d = Float::with_val(P, rho_limit_probe(k, &z, &eps).unwrap() - &rho).abs().to_f64();
            assert!(d < last && d < 10.0 * e, "eps={e}: {d}");
            last = d;
        }
    }
}

#[test]
fn class_sum_of_rho() {
    // sum over classes of rho(tau_A) = h (psi(k+t) + psi(k-t) - 2 log 2 pi + 2 L'/L(1) + log|D|)
    for (dval, k) in [(-11i64, idx(3, 1)), (-23, idx(3, 1)), (-23, idx(4, 2)), (-47, idx(5, 1))] {
        let disc = Disc::new(dval).unwrap();
        let mut sum = Float::new(P);
        for p in disc.heegner_points(3, 1).unwrap() {
            sum += rho_diagonal(k, &p.tau(P)).unwrap();
        }
        let dig = heegner::special::jacobi::digamma_int(k.k + k.t, P) + heegner::special::jacobi::digamma_int(k.k - k.t, P);
        let two_pi = Float::with_val(P, heegner::special::num::pi(P) * 2u32);
        let lpl = heegner::dirichlet::lprime_over_l_1(&disc, P).unwrap();
        let want = (dig - two_pi.ln() * 2u32 + lpl * 2u32 + Float::with_val(P, -dval).ln()) * disc.h() as u32;
        assert!(Float::with_val(P, &sum - &want).abs() < 1e-30, "D={dval}");
    }
}

#[test]
fn per_shell_identity_exact() {
    for (dval, t) in [(-11i64, 1u32), (-11, 2), (-23, 1), (-23, 2), (-47, 1)] {
        let disc = Disc::new(dval).unwrap();
        for branch in 0..disc.h() {
            let chi = HeckeChar::new(&disc, t, branch, P).unwrap();
            let cfg = GreenConfig::new(idx(t + 2, t), 3, 1, 30, P).unwrap();
            for cls in 0..disc.h() {
                for m in [1i64, 2, 5] {
                    let r = identity_residual(&cfg, &chi, m, cls).unwrap();
                    assert!(r.shell_mismatch < 1e-30, "D={dval} t={t} m={m}: {}", r.shell_mismatch);
                    // equal truncations: both sides agree term by term
                    assert!(r.residual < 1e-30, "D={dval} t={t} m={m}: {}", r.residual);
                }
            }
        }
    }
}

#[test]
fn identity_at_weight_six() {
    let disc = Disc::new(-11).unwrap();
    let chi = HeckeChar::new(&disc, 1, 0, P).unwrap();
    for m in [1i64, 2, 5] {
        let cfg = GreenConfig::new(idx(3, 1), 3, 1, 400, P).unwrap();
        let r = identity_residual(&cfg, &chi, m, 0).unwrap();
        assert!(r.residual < 1e-30, "m={m}: {}", r.residual);
        assert!(r.lhs.im.to_f64().abs() < 1e-30 * r.lhs.abs().to_f64().max(1.0));
        assert!(r.lhs_tail.is_finite() && r.rhs_tail.is_finite());
    }
}

#[test]
fn truncation_is_monotone() {
    let disc = Disc::new(-23).unwrap();
    let chi = HeckeChar::new(&disc, 1, 0, P).unwrap();
    let small = GreenConfig::new(idx(3, 1), 3, 1, 200, P).unwrap();
    let big = GreenConfig::new(idx(3, 1), 3, 1, 400, P).unwrap();
    for m in [1i64, 2] {
        let a = gamma_m(&small, &chi, m, 1).unwrap().eval;
        let b = gamma_m(&big, &chi, m, 1).unwrap().eval;
        let d = (&a.value - &b.value).abs().to_f64();
        assert!(d <= a.tail, "m={m}: {d} vs {}", a.tail);
        assert!(b.tail < a.tail);
    }
}

#[test]
fn exclude_policy_drops_diagonal() {
    let disc = Disc::new(-11).unwrap();
    let chi = HeckeChar::new(&disc, 1, 0, P).unwrap();
    let mut cfg = GreenConfig::new(idx(3, 1), 3, 1, 50, P).unwrap();
    cfg.policy = DiagonalPolicy::Exclude;
    let g = gamma_m(&cfg, &chi, 1, 0).unwrap();
    assert_eq!(g.diagonal.abs(), 0);
    assert_eq!(g.eval.value, g.off_diagonal);
    let p = disc.heegner_point(3, 1, 0).unwrap();
    let w = g_m_weighted(&cfg, 1, &p, &p, &chi).unwrap();
    // the pair weight is chi(conj(a) a) = chi((A)) = A^{2t}
    let weight = Float::with_val(P, p.a * p.a);
    assert!((&w.value.scale(&weight) - &g.off_diagonal).abs() < 1e-28);
}

#[test]
fn psi_part() {
    assert_eq!(psi_pair(idx(3, 1)), Rational::from((17, 6)));
}

#[test]
fn self_conjugate_class_is_real() {
    let disc = Disc::new(-23).unwrap();
    for branch in 0..3 {
        let chi = HeckeChar::new(&disc, 1, branch, P).unwrap();
        let cfg = GreenConfig::new(idx(3, 1), 3, 1, 100, P).unwrap();
        let g = gamma_m(&cfg, &chi, 1, 0).unwrap();
        assert!(g.eval.value.im.to_f64().abs() < 1e-30 * g.eval.value.abs().to_f64(), "branch {branch}");
    }
}

#[test]
fn weight_zero_twist_smoke() {
    // alpha^0 = 1: every matrix contributes g alone
    let disc = Disc::new(-11).unwrap();
    let p = disc.heegner_point(3, 1, 0).unwrap();
    let sh = enumerate_rnm(2, &p, &p, 20).unwrap();
    let s = alpha_sum(&p, &p, &sh.by_shell[&1], 0).unwrap();
    assert_eq!(s.x, Rational::from(sh.count(1)));
    if let Ok(chi) = HeckeChar::new(&disc, 0, 0, P) {
        let cfg = GreenConfig::new(idx(2, 0), 3, 1, 20, P).unwrap();
        let g = gamma_m(&cfg, &chi, 2, 0).unwrap();
        assert!(g.eval.value.abs().to_f64().is_finite());
    }
}

#[test]
fn algebraicity_weight_six() {
    use heegner::fourier::{admissible_support, find_relation, RelationCondition};
    let disc = Disc::new(-11).unwrap();
    let chi = HeckeChar::new(&disc, 1, 0, P).unwrap();
    let theta = ThetaTable::new(&chi, 0, 50).unwrap();
    let cands: Vec<u64> = (1..=20).collect();
    let sup = admissible_support(&cands, 3, &theta, RelationCondition::CoprimeDiagonalFree);
    assert_eq!(&sup[..2], &[2, 7]);
    // a_f(2) = -6, a_f(7) = -40
    let rows = vec![vec![Rational::from(-6), Rational::from(-40)]];
    let lambda = find_relation(&rows, &sup[..2]).unwrap();
    let cfg = GreenConfig::new(idx(3, 1), 3, 1, 2000, P).unwrap();
    let r = algebraicity(&cfg, &chi, 0, &lambda).unwrap();
    eprintln!("{:?} lhs={} rhs={} = {} resid={:e} tol={:e}", r.lambda, r.lhs, r.rhs, r.rhs_value, r.residual, r.tolerance);
    assert!(r.passed());
    assert!(!r.rhs.is_zero());
}
