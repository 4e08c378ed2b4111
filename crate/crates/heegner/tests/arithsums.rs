use heegner::arithsums::*;
use heegner::quadfield::*;
use rug::Float;

#[test]
fn prime_discriminant_sums_are_class_independent() {
    for (d, n_level, beta) in [(-11i64, 3i64, 1i64), (-23, 3, 1), (-47, 7, 1), (-71, 5, 1)] {
        let k = Disc::new(d).unwrap();
        let beta = (0..2 * n_level).find(|b| (b * b - d) % (4 * n_level) == 0).unwrap_or(beta);
        let ctxs: Vec<_> = (0..k.h()).map(|c| SigmaContext::new(&k, n_level, beta, c).unwrap()).collect();
        for n in 1..=1000u64 {
            // direct Kronecker oracle
            let mut plus = 0i64;
            let mut minus = 0i64;
            for e in 1..=n {
                if n % e != 0 {
                    continue;
                }
                let q = (n / e) as i64;
                if e as i64 % d == 0 && q % d == 0 {
                    continue;
                }
                if e as i64 % d != 0 {
                    plus += kronecker(d, e as i64) as i64;
                    minus += kronecker(d, e as i64) as i64;
                } else {
                    plus += kronecker(d, n_level * q) as i64;
                    minus += kronecker(d, -n_level * q) as i64;
                }
            }
            for c in &ctxs {
                assert_eq!(c.sigma(n), plus, "D={d} n={n}");
                let cm = c.clone().with_signs(SignConvention::Minus, SignConvention::Minus);
                assert_eq!(cm.sigma(n), minus, "D={d} n={n}");
            }
        }
    }
}

#[test]
fn inert_primes_give_zero() {
    for d in [-11i64, -15, -23, -35] {
        let k = Disc::new(d).unwrap();
        for c in 0..k.h() {
            let ctx = SigmaContext::new(&k, 1, 1, c).unwrap();
            for p in (2..1000u64).filter(|&p| factorize(p).len() == 1 && factorize(p)[0].1 == 1) {
                if kronecker(d, p as i64) == -1 {
                    assert_eq!(ctx.sigma(p), 0);
                    assert!(ctx.sigma_prime(p).is_zero() || ctx.sigma_prime(p).coeffs.len() == 1);
                }
            }
        }
    }
}

#[test]
fn sieve_matches_divisor_sums() {
    for (d, n) in [(-11i64, 3i64), (-15, 1), (-35, 1), (-23, 2)] {
        let k = Disc::new(d).unwrap();
        for c in 0..k.h() {
            let ctx = SigmaContext::new(&k, n, 1, c).unwrap();
            let tab = ctx.sigma_table(2000);
            for m in 1..=2000u64 {
                assert_eq!(tab[m as usize], ctx.sigma(m), "D={d} cls={c} n={m}");
            }
        }
    }
}

#[test]
fn sigma_prime_symbolic_matches_numeric_and_is_even() {
    for d in [-11i64, -15, -23, -35] {
        let k = Disc::new(d).unwrap();
        for c in 0..k.h() {
            // level with every prime split, as the Heegner hypothesis requires
            let level = (2..).find(|&p| kronecker(d, p) == 1 && factorize(p as u64).len() == 1).unwrap();
            let ctx = SigmaContext::new(&k, level, 1, c).unwrap();
            for n in 1..=500u64 {
                let sym = ctx.sigma_prime(n);
                let mut direct = Float::new(128);
                for e in divisors(n) {
                    let w = ctx.eps(n, e);
                    let lg = (Float::with_val(128, n) / Float::with_val(128, e * e)).ln();
                    direct += lg * w;
                }
                let diff = (sym.eval(128) - &direct).abs();
                assert!(diff < 1e-30, "D={d} n={n}");
                for (_, v) in sym.integer_coeffs().unwrap() {
                    assert_eq!(v % 2, 0, "D={d} n={n}: {sym}");
                }
            }
        }
    }
}

#[test]
fn eps_values_are_units_or_zero() {
    let k = Disc::new(-35).unwrap();
    for c in 0..k.h() {
        let ctx = SigmaContext::new(&k, 1, 1, c).unwrap();
        for n in 1..300u64 {
            for e in divisors(n) {
                let v = ctx.eps(n, e);
                assert!(v.abs() <= 1);
                let g = gcd(gcd(e as i64, (n / e) as i64), 35);
                assert_eq!(v == 0, g != 1);
            }
        }
    }
}
