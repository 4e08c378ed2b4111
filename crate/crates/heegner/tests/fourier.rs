use heegner::fourier::*;
use heegner::heckechar::HeckeChar;
use heegner::quadfield::Disc;
use heegner::special::jacobi::JacobiIndex;
use rug::{Float, Integer, Rational};

/// q-expansion of eta(z)^6 eta(3z)^6 by direct product expansion.
fn eta6eta6(upto: usize) -> Vec<i64> {
    let mut s = vec![0i64; upto + 1];
    s[0] = 1;
    for step in [1usize, 3] {
        for n in (step..=upto).step_by(step) {
            for _ in 0..6 {
                // multiply by (1 - q^n)
                for i in (n..=upto).rev() {
                    s[i] -= s[i - n];
                }
            }
        }
    }
    // overall factor q^{(6 + 18)/24} = q
    let mut out = vec![0i64; upto + 1];
    out[1..=upto].copy_from_slice(&s[..upto]);
    out
}

fn engine(k: u32, n0: u64, m_max: u64) -> FourierEngine {
    let disc = Disc::new(-11).unwrap();
    let chi = HeckeChar::new(&disc, 1, 0, 128).unwrap();
    let fp = FourierParams::new(JacobiIndex::new(k, 1).unwrap(), 3, 1, chi, 0, n0).unwrap();
    FourierEngine::new(fp, m_max).unwrap()
}

#[test]
fn eigenform_oracle() {
    assert_eq!(eta6eta6(12)[1..], [1, -6, 9, 4, 6, -54, -40, 168, 81, -36, -564, 36]);
}

#[test]
fn finite_part_example_and_exactness() {
    let e = engine(3, 100, 10);
    // m=1: shells n = 1, 2, 3 use r(8), r(5), r(2) = 0
    assert!(e.theta().is_zero(2));
    assert_eq!(e.theta().r_rational(5).unwrap(), -1);
    for m in [1u64, 2, 4, 5, 7] {
        let num = e.a_fin(m).unwrap();
        let exact = e.a_fin_exact(m).unwrap();
        let d = Float::with_val(128, &num.re - exact.eval(128)).abs().to_f64();
        assert!(d < 1e-28 * (1.0 + num.re.to_f64().abs()), "m={m}");
    }
    // a_fin(1) by hand: r(1) log 3 (h=u=1, D^t = -11) minus shells
    let p = heegner::special::jacobi::p_kt_poly(JacobiIndex::new(3, 1).unwrap());
    let mut want = Rational::from(-11) * 1;
    let mut logs = heegner::arithsums::PrimeLogs::log_of(&Rational::from(3), &want);
    for (n, rr) in [(1u64, 0i64), (2, -1)] {
        let x = Rational::from(1) - Rational::from((6 * n, 11));
        want = Rational::from(rr) * p.eval_rational(&x);
        logs.add(&e.sigma.sigma_prime(n).scaled(&-want.clone()));
    }
    // 2 is inert, so no ideal has norm 8
    assert!(e.theta().is_zero(8));
    assert_eq!(logs, e.a_fin_exact(1).unwrap());
    // r(2) = 0 removes the log term for m = 2
    assert!(e.r(2).abs() == 0);
}

#[test]
fn rejects_bad_parameters() {
    let disc = Disc::new(-11).unwrap();
    let chi = HeckeChar::new(&disc, 1, 0, 128).unwrap();
    // 2 is inert in Q(sqrt -11)
    assert!(FourierParams::new(JacobiIndex::new(3, 1).unwrap(), 2, 1, chi.clone(), 0, 10).is_err());
    assert!(FourierParams::new(JacobiIndex::new(3, 0).unwrap(), 3, 1, chi.clone(), 0, 10).is_err());
    assert!(FourierParams::new(JacobiIndex::new(3, 1).unwrap(), 3, 2, chi.clone(), 0, 10).is_err());
    let e = engine(3, 10, 10);
    assert!(e.a_m(3).is_err());
    assert!(e.a_m(6).is_err());
    let fp = FourierParams::new(JacobiIndex::new(3, 1).unwrap(), 3, 1, chi, 0, 100).unwrap().with_budget(1e-30);
    let e = FourierEngine::new(fp, 4).unwrap();
    assert!(matches!(e.a_inf(2), Err(heegner::Error::TailBudget { .. })));
}

#[test]
fn weight_six_ratios_are_constant() {
    let af = eta6eta6(10);
    let e = engine(3, 20_000, 10);
    let ms = [2u64, 4, 5, 7];
    let vals: Vec<_> = ms.iter().map(|&m| e.a_m(m).unwrap()).collect();
    for i in 0..ms.len() {
        for j in 0..ms.len() {
            let (a, b) = (&vals[i], &vals[j]);
            let cross = a.real().to_f64() * af[ms[j] as usize] as f64 - b.real().to_f64() * af[ms[i] as usize] as f64;
            let scale = (a.real().to_f64() * af[ms[j] as usize] as f64).abs();
            let tol = a.tail * (af[ms[j] as usize] as f64).abs() + b.tail * (af[ms[i] as usize] as f64).abs();
            assert!(cross.abs() <= tol.max(1e-3 * scale), "m={} m'={}", ms[i], ms[j]);
        }
    }
}

#[test]
fn weight_four_coefficient_vanishes() {
    let e = engine(2, 50_000, 2);
    let d = e.a_inf_detailed(2).unwrap();
    let a2 = e.a_m(2).unwrap();
    assert!(a2.real().to_f64().abs() <= 1e-2 * d.max_term);
    assert!(a2.real().to_f64().abs() <= a2.tail);
}

#[test]
fn truncation_is_monotone() {
    let small = engine(3, 2_000, 5);
    let big = engine(3, 4_000, 5);
    for m in [1u64, 2, 5] {
        let a = small.a_inf(m).unwrap();
        let b = big.a_inf(m).unwrap();
        let d = Float::with_val(128, a.real() - b.real()).abs().to_f64();
        assert!(d <= a.tail, "m={m}: {d} vs {}", a.tail);
    }
}

#[test]
fn relation_annihilates_basis() {
    let af = eta6eta6(20);
    let e = engine(3, 10, 20);
    let cands: Vec<u64> = (1..=20).collect();
    let sup = admissible_support(&cands, 3, e.theta(), RelationCondition::CoprimeDiagonalFree);
    assert!(sup.iter().all(|&m| m % 3 != 0 && e.theta().is_zero(m)));
    let sup = &sup[..2];
    let rows = vec![sup.iter().map(|&m| Rational::from(af[m as usize])).collect::<Vec<_>>()];
    let lam = find_relation(&rows, sup).unwrap();
    assert!(annihilates(&rows, &lam));
    assert!(lam.iter().any(|(_, l)| *l != 0));
    // dimension zero: any single index
    let lam = find_relation(&[], &[2]).unwrap();
    assert_eq!(lam, vec![(2, Integer::from(1))]);
    assert_eq!(dim_cusp_forms(4, 3), 0);
    assert_eq!(dim_cusp_forms(6, 3), 1);
}

#[test]
fn dimension_table() {
    // published values of dim S_k(Gamma_0(N))
    let table = [((2, 11), 1), ((2, 37), 2), ((4, 5), 1), ((8, 2), 1), ((2, 23), 2), ((12, 1), 1), ((6, 5), 1), ((10, 3), 2)];
    for ((k, n), d) in table {
        assert_eq!(dim_cusp_forms(k, n), d, "k={k} N={n}");
    }
}
