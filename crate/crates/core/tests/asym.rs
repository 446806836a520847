use mobius_sift::asym::*;
use mobius_sift::constants::{gamma_mn_closed, EULER_GAMMA};
use mobius_sift::exact_sums::SiftedSums;
use mobius_sift::primesums::{log_grid, mertens_product, FitBasis};
use proptest::prelude::*;

fn small_series(i_max: usize, j_max: usize) -> impl Strategy<Value = BiSeries> {
    prop::collection::vec(-1.0f64..1.0, (i_max + 1) * (j_max + 1)).prop_map(move |c| {
        let mut s = BiSeries::zeros(i_max, j_max);
        for i in 0..=i_max {
            for j in 0..=j_max {
                s.set(i, j, c[i * (j_max + 1) + j]);
            }
        }
        s
    })
}

proptest! {
    #[test]
    fn product_is_associative(a in small_series(5, 2), b in small_series(5, 2), c in small_series(5, 2)) {
        let left = &(&a * &b) * &c;
        let right = &a * &(&b * &c);
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn exp_inverts_log_of_one_plus_s(s in small_series(5, 2)) {
        // keep the u^0 row empty so that log(1+S) is defined
        let mut s = s.scale(0.5);
        for j in 0..=2 {
            s.set(0, j, 0.0);
        }
        let one_plus = &BiSeries::constant(1.0, 5, 2) + &s;
        let back = one_plus.log().unwrap().exp().unwrap();
        prop_assert!(back.max_abs_diff(&one_plus) < 1e-12);
    }

    #[test]
    fn reciprocal_is_inverse(s in small_series(6, 1)) {
        let mut s = s;
        s.set(0, 1, 0.0);
        s.set(0, 0, 1.5);
        let prod = &s * &s.recip().unwrap();
        prop_assert!(prod.max_abs_diff(&BiSeries::constant(1.0, 6, 1)) < 1e-12);
    }
}

#[test]
fn hankel_coefficients_follow_reciprocal_gamma_index_order() {
    for i in 1..=3 {
        for j in 1..=3 {
            let quad = hankel_coeff_quadrature(i, j, 40.0).unwrap();
            let closed = hankel_coeff(i, j).unwrap();
            assert!((quad - closed).abs() < 1e-6, "H({i},{j}): {quad} vs {closed}");
            assert_eq!(closed, gamma_mn_closed(j, i - 1).unwrap());
        }
    }
    // the transposed reading differs, so the test pins the convention
    assert!((hankel_coeff(1, 2).unwrap() - gamma_mn_closed(1, 1).unwrap()).abs() > 0.1);
    assert_eq!(hankel_coeff(1, 1).unwrap(), 1.0);
}

#[test]
fn phi_magnitude_stays_within_log_power_envelope() {
    let k = 2;
    let ys = [1e2, 1e3, 1e4];
    let tables: Vec<PhiTable> = ys.iter().map(|&y| phi_table(y, k, 3).unwrap()).collect();
    for i in 1..=3 {
        for j in 0..k as usize {
            let ratios: Vec<f64> = tables
                .iter()
                .map(|t| {
                    let ly = t.y.ln();
                    t.get(i, j).abs() / (ly.powi(i as i32 + 1) * ly.ln().powi(k as i32 - 1))
                })
                .collect();
            let max = ratios.iter().cloned().fold(0.0, f64::max);
            assert!(max < 10.0, "phi[{i}][{j}]: {ratios:?}");
            // the ratio does not grow along the grid
            assert!(ratios[2] <= 2.0 * ratios[0], "phi[{i}][{j}]: {ratios:?}");
        }
    }
}

#[test]
fn phi_tables_are_certified_and_bounded_in_l() {
    for k in 1..=4u32 {
        let t = phi_table(50.0, k, 4).unwrap();
        assert_eq!(t.values[1].len(), k as usize);
        assert_eq!(t.get(2, k as usize), 0.0);
        for i in 0..=4 {
            for j in 0..k as usize {
                assert!(t.radius(i, j) <= DEFAULT_PHI_TOL * t.get(i, j).abs().max(1.0));
            }
        }
    }
}

#[test]
fn phi_lowest_entry_is_g_at_one() {
    // φ[1][k−1] = (−1)^k/(k−1)! · G_0 for every k: only l = 0 carries L^{k−1}
    for k in 1..=4u32 {
        let t = phi_table(30.0, k, 2).unwrap();
        let g0 = -1.0 / mertens_product(30.0);
        let fact: f64 = (1..k).map(f64::from).product();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let expect = sign * g0 / fact;
        assert!((t.get(1, k as usize - 1) - expect).abs() < 1e-12 * expect.abs(), "k={k}");
    }
}

#[test]
fn phi_fit_recovers_mertens_slope() {
    // φ[1][1] at k=2 is −Π_{p≤y}(1−1/p)^{−1} ≈ −e^γ log y
    let ys = log_grid(1e3, 1e6, 7);
    let f = phi_fit(2, 1, 1, &ys, Some(FitBasis::PolyLogY { degree: 1 })).unwrap();
    assert!((f.leading() + EULER_GAMMA.exp()).abs() < 0.01 * EULER_GAMMA.exp(), "{}", f.leading());
}

#[test]
fn main_term_tracks_exact_sums_at_k2() {
    let xs = [100_000u64, 1_000_000, 10_000_000];
    let sums = SiftedSums::new(10_000_000);
    let n1 = compare(&sums, &xs, 5.0, 2, 1, &Window::default()).unwrap();
    let n2 = compare(&sums, &xs, 5.0, 2, 2, &Window::default()).unwrap();
    for r in n1.iter().chain(&n2) {
        assert!(r.main_term > 0.0 && r.exact > 0, "{r:?}");
    }
    let res: Vec<f64> = n2.iter().map(|r| r.normalized_residual).collect();
    let max = res.iter().cloned().fold(f64::MIN, f64::max);
    let min = res.iter().cloned().fold(f64::MAX, f64::min);
    assert!(max / min < 10.0, "{res:?}");
    let last = |rows: &[CompareRow]| (rows[2].exact as f64 - rows[2].main_term).abs();
    assert!(last(&n2) <= last(&n1));
}

#[test]
fn k1_pipeline_is_pure_error_term() {
    let xs = [100_000u64, 1_000_000, 10_000_000];
    let sums = SiftedSums::new(10_000_000);
    let rows = compare(&sums, &xs, 5.0, 1, 1, &Window::default()).unwrap();
    for r in &rows {
        assert_eq!(r.main_term, 0.0);
        let x = r.x as f64;
        assert!((r.exact as f64).abs() * x.ln() / x < 1.0, "{r:?}");
    }
}

#[test]
fn compare_rejects_y_outside_window() {
    let sums = SiftedSums::new(1000);
    let err = compare(&sums, &[1000], 40.0, 2, 1, &Window::default()).unwrap_err();
    assert!(err.to_string().contains("x^(1/k)"), "{err}");
    let tight = Window {
        y0: 1.0,
        power: 0.1,
        epsilon: 0.1,
    };
    let err = compare(&sums, &[1000], 5.0, 2, 1, &tight).unwrap_err();
    assert!(err.to_string().contains("Y0 exp"), "{err}");
}
