use mobius_sift::exact_sums::*;
use mobius_sift::sieve::{distinct_prime_factors, Sieve, INFINITY_MARK};
use proptest::prelude::*;

/// μ(n) by trial division.
fn mobius(n: u64) -> i64 {
    let ps = distinct_prime_factors(n);
    if ps.iter().product::<u64>() != n {
        0
    } else if ps.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[test]
fn k1_without_sifting_is_the_mertens_function() {
    let xs: Vec<u64> = (1..=10_000).collect();
    let grid = SiftedSums::with_cache(10_000, None).mkw_grid(&xs, 1.0, 1, None).unwrap();
    let mut m = 0i64;
    for (x, v) in xs.iter().zip(&grid) {
        m += mobius(*x);
        assert_eq!(*v, m, "x = {x}");
    }
    assert_eq!(grid[999], 2);
    assert_eq!(grid[9_999], -23);
}

#[test]
fn vanishing_holds_on_a_grid() {
    let xs: Vec<u64> = (1..=60).map(|i| i * 1000).collect();
    let sums = SiftedSums::with_cache(60_000, None);
    for k in 2..=5u32 {
        for &x in &xs {
            let y = (x as f64).powf(1.0 / f64::from(k));
            assert_eq!(sums.mkw_grid(&[x], y * 1.0001, k, None).unwrap()[0], 0, "x={x} k={k}");
        }
    }
    // just inside the root the sum is not forced to vanish
    let y = 1000f64.sqrt() * 0.9;
    assert_ne!(sums.mkw_grid(&[1000], y, 2, None).unwrap()[0], 0);
}

#[test]
fn duality_needs_f_to_vanish_at_infinity() {
    // f(∞) = 1 adds the empty divisor's term for k = 1 and breaks both relations
    let f = |p: u64| if p == INFINITY_MARK { 1 } else { p as i64 };
    let broken = (2..200u64).filter(|&n| duality_check(n, 1, f) != (true, true)).count();
    assert!(broken > 0);
    let g = |p: u64| if p == INFINITY_MARK { 0 } else { p as i64 };
    assert!((1..200u64).all(|n| duality_check(n, 1, g) == (true, true)));
}

#[test]
fn duality_sweep_reports_every_fixture() {
    for k in 1..=3 {
        for f in PrimeFn::ALL {
            let r = duality_sweep(20_000, k, f).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.checked, 20_000);
        }
    }
}

#[test]
fn residue_classes_partition_the_unrestricted_series() {
    // every n > 1 has p_1(n) in exactly one class mod 6 coprime to 6, or p_1 ∈ {2, 3}
    let x = 50_000u64;
    let sums = SiftedSums::with_cache(x, None);
    for k in 1..=2u32 {
        let all = sums.residue_grid(ResidueFilter::new(1, 0).unwrap(), k, &[x]).unwrap()[0];
        let c1 = sums.residue_grid(ResidueFilter::new(6, 1).unwrap(), k, &[x]).unwrap()[0];
        let c5 = sums.residue_grid(ResidueFilter::new(6, 5).unwrap(), k, &[x]).unwrap()[0];
        let small: f64 = (2..=x)
            .filter(|&n| matches!(distinct_prime_factors(n).first(), Some(2 | 3)))
            .map(|n| {
                let w = distinct_prime_factors(n).len() as u8;
                weight(mobius(n) as i8, w, k) as f64 / n as f64
            })
            .sum();
        let one = if k == 1 { 1.0 } else { 0.0 };
        assert!((all - (one + c1 + c5 + small)).abs() < 1e-10, "k={k}");
    }
}

#[test]
fn ceiling_and_grid_errors() {
    let s = SiftedSums::with_sieve(Sieve::new(10_001).with_ceiling(1000));
    assert!(matches!(s.mkw_grid(&[5000], 2.0, 1, None), Err(ExactSumError::AboveCeiling { .. })));
    let s = SiftedSums::with_cache(1000, None);
    assert!(s.mkw_grid(&[500, 100], 2.0, 1, None).is_err());
    assert!(SumRequest::new(10, f64::NAN, 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vanishes_for_y_at_least_the_kth_root(x in 10u64..30_000, k in 2u32..6, t in 0.0f64..2.0) {
        let y = (x as f64).powf(1.0 / f64::from(k)) * (1.0 + t);
        prop_assert_eq!(mkw_exact(&SumRequest::new(x, y, k).unwrap()).unwrap(), 0);
    }

    #[test]
    fn duality_holds_for_random_prime_functions(n in 1u64..2_000_000, k in 1u32..5, a in -5i64..5, b in -5i64..5) {
        let f = move |p: u64| if p == INFINITY_MARK { 0 } else { a * p as i64 + b * (p % 3) as i64 };
        prop_assert_eq!(duality_check(n, k, f), (true, true));
    }

    #[test]
    fn grid_matches_pointwise(xs in prop::collection::btree_set(1u64..20_000, 1..6), y in 1.5f64..40.0, k in 1u32..4) {
        let xs: Vec<u64> = xs.into_iter().collect();
        let sums = SiftedSums::with_cache(20_000, None);
        let grid = sums.mkw_grid(&xs, y, k, None).unwrap();
        for (x, g) in xs.iter().zip(grid) {
            prop_assert_eq!(g, mkw_exact(&SumRequest::new(*x, y, k).unwrap()).unwrap());
        }
    }
}

#[test]
fn unrestricted_series_at_ten() {
    let sums = SiftedSums::with_cache(10, None);
    let s = sums.residue_grid(ResidueFilter::new(1, 0).unwrap(), 1, &[10]).unwrap()[0];
    let direct = 1.0 - 1.0 / 2.0 - 1.0 / 3.0 - 1.0 / 5.0 + 1.0 / 6.0 - 1.0 / 7.0 + 1.0 / 10.0;
    assert!((s - direct).abs() < 1e-15);
    assert!((s - 0.090476).abs() < 1e-6);
}
