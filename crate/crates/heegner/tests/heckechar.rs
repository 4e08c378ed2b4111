use heegner::heckechar::*;
use heegner::quadfield::*;
use heegner::Complex;
use rug::ops::Pow;
use rug::{Float, Rational};

const P: u32 = 128;

fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
    (a - b).abs().to_f64() <= tol * (1.0 + b.abs().to_f64())
}

#[test]
fn principal_ideals_get_alpha_power() {
    for (d, t) in [(-11, 1), (-23, 1), (-23, 2), (-47, 1), (-3, 3), (-15, 2)] {
        let k = Disc::new(d).unwrap();
        for branch in 0..k.h() {
            let chi = HeckeChar::new(&k, t, branch, P).unwrap();
            for (p, q) in [(1i128, 1i128), (3, 1), (5, -1), (2, 0), (7, 3)] {
                if (p - q) % 2 != 0 {
                    continue;
                }
                let alpha = KNum::half(d, p, q);
                // the principal ideal (alpha) from its Z-basis
                let n = alpha.norm();
                if *n.denom() != 1 {
                    continue;
                }
                let gens: Vec<_> = [KNum::one(d), KNum::half(d, 1, 1)]
                    .iter()
                    .map(|b| alpha.mul(b).half_coords().unwrap())
                    .collect();
                let (a0, b0, c0) = heegner::quadfield::ideal::hnf(&gens);
                // HNF (A, B, C): content C, a = A / C, omega-coefficient gives b
                let content = c0 as i64;
                let a = (a0 / c0) as i64;
                let b = (2 * (b0 / c0) + 1) as i64;
                let id = Ideal::new(d, content, a, b);
                assert_eq!(id.norm(), n.numer().to_i128().unwrap());
                let got = chi.eval(&id).to_complex(P);
                let want = alpha.pow(2 * t).to_complex(P);
                assert!(close(&got, &want, 1e-30), "D={d} t={t} alpha=({p}+{q}sqrtD)/2");
            }
        }
    }
}

#[test]
fn character_is_multiplicative_with_right_modulus() {
    for (d, t) in [(-23, 1), (-47, 1), (-35, 1), (-71, 2)] {
        let k = Disc::new(d).unwrap();
        for branch in 0..k.h() {
            let chi = HeckeChar::new(&k, t, branch, P).unwrap();
            let mut ids = Vec::new();
            for n in 1..30 {
                ids.extend(k.ideals_of_norm(n).into_iter().map(|x| x.0));
            }
            for a in ids.iter().take(12) {
                let ca = chi.eval(a).to_complex(P);
                let nt = Float::with_val(P, a.norm()).pow(t);
                assert!((ca.abs() - &nt).abs() < 1e-25 * nt.to_f64());
                for b in ids.iter().take(12) {
                    let cb = chi.eval(b).to_complex(P);
                    let cab = chi.eval(&a.mul(b)).to_complex(P);
                    assert!(close(&cab, &(&ca * &cb), 1e-28));
                }
            }
        }
    }
}

#[test]
fn branches_differ_by_class_group_characters() {
    let k = Disc::new(-23).unwrap();
    let chis: Vec<_> = (0..3).map(|b| HeckeChar::new(&k, 1, b, P).unwrap()).collect();
    let g = k.cg.gens[0].0;
    let r = k.class_ideal(g);
    let v: Vec<Complex> = chis.iter().map(|c| c.eval(&r).to_complex(P)).collect();
    // each cubed equals alpha^2 with R^3 = (alpha)
    let alpha2 = chis[0].gen_alpha[0].pow(2).to_complex(P);
    for x in &v {
        assert!(close(&x.powu(3), &alpha2, 1e-28));
    }
    let ratio = v[1].div(&v[0]);
    assert!((ratio.abs().to_f64() - 1.0).abs() < 1e-28);
    assert!(close(&ratio.powu(3), &Complex::one(P), 1e-28));
    assert!(!close(&ratio, &Complex::one(P), 1e-3));
}

#[test]
fn d11_examples() {
    let k = Disc::new(-11).unwrap();
    let chi = HeckeChar::new(&k, 1, 0, P).unwrap();
    let tab = ThetaTable::new(&chi, 0, 5).unwrap();
    let v: Vec<i64> = (1..=5).map(|n| tab.r_rational(n).unwrap().to_f64() as i64).collect();
    assert_eq!(v, vec![1, 0, -5, 4, -1]);
    // lattice oracle for n = 3: x = (+-1 +- sqrt(-11))/2, Re x^2 = (p^2 - 11 q^2)/4, halved
    let s: i64 = [(1, 1), (1, -1), (-1, 1), (-1, -1)].iter().map(|&(p, q): &(i64, i64)| p * p - 11 * q * q).sum();
    assert_eq!(s / 8, -5);
}

#[test]
fn partition_over_classes_matches_ideal_sum() {
    for (d, t) in [(-11, 1), (-23, 1), (-15, 1), (-47, 2), (-35, 1)] {
        let k = Disc::new(d).unwrap();
        for branch in 0..k.h() {
            let chi = HeckeChar::new(&k, t, branch, P).unwrap();
            let tabs = theta_tables(&chi, 200).unwrap();
            for n in 1..=200u64 {
                let mut by_class = vec![Complex::zero(P); k.h()];
                for (id, c) in k.ideals_of_norm(n) {
                    by_class[c] = &by_class[c] + &chi.eval(&id).to_complex(P);
                }
                let mut total_t = Complex::zero(P);
                let mut total_i = Complex::zero(P);
                for c in 0..k.h() {
                    let rc = tabs[c].r_complex(n, P);
                    assert!(close(&rc, &by_class[c], 1e-28), "D={d} n={n} cls={c}");
                    total_t = &total_t + &rc;
                    total_i = &total_i + &by_class[c];
                }
                assert!(close(&total_t, &total_i, 1e-28));
            }
        }
    }
}

#[test]
fn exact_partition_and_scaling_h1() {
    let k = Disc::new(-11).unwrap();
    for t in 1..=3 {
        let chi = HeckeChar::new(&k, t, 0, P).unwrap();
        let tab = ThetaTable::new(&chi, 0, 20 * 11).unwrap();
        for n in 1..=200 {
            let want = k
                .ideals_of_norm(n)
                .iter()
                .fold(KNum::zero(-11), |acc, (id, _)| acc.add(chi.eval(id).exact().unwrap()));
            assert_eq!(tab.r(n).exact().unwrap(), &want);
        }
        let dt = Rational::from(-11).pow(t as i32);
        for m in 1..=20 {
            let lhs = tab.r_rational(11 * m).unwrap();
            let rhs = Rational::from(&dt * tab.r_rational(m).unwrap());
            assert_eq!(lhs, rhs, "t={t} m={m}");
        }
    }
}

#[test]
fn scaling_h3() {
    let k = Disc::new(-23).unwrap();
    let chi = HeckeChar::new(&k, 1, 1, P).unwrap();
    for tab in theta_tables(&chi, 20 * 23).unwrap() {
        for m in 1..=20 {
            let lhs = tab.r_complex(23 * m, P);
            let rhs = tab.r_complex(m, P).scale(&Float::with_val(P, -23));
            assert!(close(&lhs, &rhs, 1e-28));
        }
    }
}

#[test]
fn growth_and_conjugation() {
    let k = Disc::new(-23).unwrap();
    let chi = HeckeChar::new(&k, 1, 0, P).unwrap();
    let tabs = theta_tables(&chi, 10_000).unwrap();
    for tab in &tabs {
        let mut worst: f64 = 0.0;
        for n in 1..=10_000u64 {
            let r = tab.r_complex(n, 64).abs().to_f64();
            let count = divisors(n).iter().map(|&e| kronecker(-23, e as i64) as f64).sum::<f64>();
            assert!(r <= count * (n as f64).powi(1) * (1.0 + 1e-12));
            worst = worst.max(r / (n as f64).powf(1.5));
        }
        assert!(worst < 10.0);
    }
    // principal class is real; conjugate classes agree up to a fixed unit
    for n in 1..300 {
        assert!(tabs[0].r_complex(n, P).im.clone().abs() < 1e-25);
    }
    let (a, b) = (1usize, k.conj_class(1));
    assert_ne!(a, b);
    let mut zeta: Option<Complex> = None;
    for n in 1..300 {
        let x = tabs[a].r_complex(n, P);
        let y = tabs[b].r_complex(n, P);
        if x.abs() < 1e-20 {
            assert!(y.abs() < 1e-20);
            continue;
        }
        let z = y.div(&x.conj());
        match &zeta {
            None => zeta = Some(z),
            Some(z0) => assert!(close(&z, z0, 1e-25)),
        }
    }
    let z = zeta.unwrap();
    assert!(close(&z.powu(3), &Complex::one(P), 1e-25));
}
