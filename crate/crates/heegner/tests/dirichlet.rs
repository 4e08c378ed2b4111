use heegner::dirichlet::*;
use heegner::quadfield::*;
use rug::Float;

fn diff(a: &Float, b: &Float) -> f64 {
    Float::with_val(a.prec(), a - b).abs().to_f64()
}

#[test]
fn l1_closed_form() {
    let p = 128;
    let pi = Float::with_val(p, rug::float::Constant::Pi);
    let k = Disc::new(-11).unwrap();
    let want = Float::with_val(p, &pi / Float::with_val(p, 11).sqrt());
    assert!(diff(&l1_exact(&k).value(p), &want) < 1e-35);
    let k = Disc::new(-23).unwrap();
    let want = Float::with_val(p, &pi * 3u32) / Float::with_val(p, 23).sqrt();
    assert!(diff(&l1_exact(&k).value(p), &want) < 1e-35);
    let k = Disc::new(-3).unwrap();
    let want = Float::with_val(p, &pi / Float::with_val(p, 27).sqrt());
    assert!(diff(&l1_exact(&k).value(p), &want) < 1e-35);
    for d in [-3i64, -7, -11, -15, -23, -35, -47, -71, -103] {
        let k = Disc::new(d).unwrap();
        let exact = l1_exact(&k).value(p);
        assert!(diff(&exact, &l1_digamma(d, p)) < 1e-33, "D={d}");
        assert!(diff(&exact, &dual_route(d, p).l1_smoothed) < 1e-33, "D={d}");
    }
}

#[test]
fn two_routes_agree() {
    for d in [-3i64, -7, -11, -19, -23, -47, -71, -163] {
        let r = dual_route(d, 128);
        assert!(r.discrepancy() < 1e-20, "D={d}: {}", r.discrepancy());
        assert!(r.discrepancy() < 1e-33, "D={d}: {}", r.discrepancy());
    }
}

#[test]
fn precision_scaling() {
    let k = Disc::new(-23).unwrap();
    let a = lprime_over_l_1(&k, 96).unwrap();
    let b = lprime_over_l_1(&k, 192).unwrap();
    assert!(diff(&Float::with_val(192, &a), &b) < 2f64.powi(-80));
    // cached value is returned unchanged
    assert_eq!(lprime_over_l_1(&k, 96).unwrap(), a);
}

#[test]
fn deprived_series_matches_euler_factor() {
    for d in [-11i64, -23, -47] {
        for level in [3u64, 6, 15, 35, 1] {
            let direct = deprived_coefficients(d, level, 2000);
            let conv = euler_deprived_by_convolution(d, level, 2000);
            assert_eq!(direct, conv, "D={d} N={level}");
        }
    }
}
