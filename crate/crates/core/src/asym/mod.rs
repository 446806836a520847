//! Expansion of the sifted-sum generating function around `s = 1` and the
//! resulting main term.
//!
//! With `u = s − 1` and `L = log(1/u)`,
//!
//! ```text
//! (−1)^k/((k−1)! s ζ(s)) Σ_l C(k−1,l) (L + Δ(s))^{k−1−l} Σ_n D_s^n G_l(1,y,−1) u^n/n!
//!     = Σ φ[i][j](y) u^i L^j,
//! ```
//!
//! where `Δ(s) = log((s−1)ζ(s))`. Substituting `s = 1 + w/log x` turns
//! `u^i L^J` into `(w/log x)^i (log log x − log w)^J`, and the Hankel
//! integral of `w^i (log w)^j e^w` is `H(i,j) = Γ_{j,i−1}`. Hence
//!
//! ```text
//! main(x) = x/log x · Σ_{i≤N} Σ_{1≤J<k} Σ_{1≤j≤J}
//!           φ[i][J] (−1)^j C(J,j) H(i,j) (log log x)^{J−j} / (log x)^i.
//! ```
//!
//! The `j = 0` terms are entire in `w` and integrate to zero.

pub mod series;

use serde::Serialize;
use thiserror::Error;

pub use series::{BiSeries, SeriesError};

use crate::constants::{gamma_mn_closed, stieltjes_const, ConstError, GAMMA_MAX_M, GAMMA_MAX_N};
use crate::exact_sums::{ExactSumError, SiftedSums};
use crate::hankel::{hankel_integral, HankelContourSpec, HankelError};
use crate::numeric::{binom_f64, factorial_f64};
use crate::primesums::{
    asymptotic_fit, default_tail_cut, FitBasis, FitError, FitResult, MixedDerivTable, PrimeSumError, MAX_TAIL_CUT, MIN_Y,
};

/// Highest u-order of the ζ, Δ and 1/(sζ) expansions.
pub const MAX_SERIES_ORDER: usize = 8;
pub const MAX_PHI_K: u32 = 4;
pub const MAX_PHI_ORDER: usize = 6;
pub const MAX_MAIN_N: usize = 4;
/// Internal orders carried past the requested main-term order.
pub const EXTRA_ORDERS: usize = 2;
/// Relative radius allowed on each φ entry.
pub const DEFAULT_PHI_TOL: f64 = 1e-4;

#[derive(Debug, Error)]
pub enum AsymError {
    #[error("series order {order} exceeds {max}")]
    SeriesOrder { order: usize, max: usize },
    #[error("k = {k} outside 1..={max}")]
    KOutOfRange { k: u32, max: u32 },
    #[error("order {order} outside {min}..={max}")]
    OrderOutOfRange { order: usize, min: usize, max: usize },
    #[error("invalid main-term parameters: {0}")]
    Params(String),
    #[error("phi[{i}][{j}] radius {radius:e} exceeds tolerance {tol:e}")]
    Radius { i: usize, j: usize, radius: f64, tol: f64 },
    #[error("y = {y} exceeds the window bound {bound} = {value} at x = {x}")]
    Window {
        x: f64,
        y: f64,
        bound: &'static str,
        value: f64,
    },
    #[error("Hankel coefficient H({i},{j}) needs Γ_({j},{n}), outside the table", n = *i as i64 - 1)]
    MissingGamma { i: usize, j: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    PrimeSum(#[from] PrimeSumError),
    #[error(transparent)]
    Constants(#[from] ConstError),
    #[error(transparent)]
    Hankel(#[from] HankelError),
    #[error(transparent)]
    Exact(#[from] ExactSumError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

fn check_order(order: usize) -> Result<(), AsymError> {
    if order > MAX_SERIES_ORDER {
        return Err(AsymError::SeriesOrder {
            order,
            max: MAX_SERIES_ORDER,
        });
    }
    Ok(())
}

/// `(s−1)ζ(s) = 1 + Σ_{n≥0} (−1)^n γ_n u^{n+1}/n!` as a pure u-series.
pub fn zeta_series(order: usize) -> Result<BiSeries, AsymError> {
    check_order(order)?;
    let mut c = vec![1.0];
    for n in 0..order {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        c.push(sign * stieltjes_const(n)? / factorial_f64(n));
    }
    Ok(BiSeries::from_u_coeffs(&c, order, 0))
}

/// `Δ(s) = log((s−1)ζ(s))`.
pub fn delta_series(order: usize) -> Result<BiSeries, AsymError> {
    Ok(zeta_series(order)?.log()?)
}

/// `1/(sζ(s)) = u / ((1+u)(s−1)ζ(s))`.
pub fn inv_s_zeta_series(order: usize) -> Result<BiSeries, AsymError> {
    let z = zeta_series(order)?;
    let one_plus_u = BiSeries::from_u_coeffs(&[1.0, 1.0], order, 0);
    let u = BiSeries::u(order, 0);
    Ok(&u * &(&one_plus_u * &z).recip()?)
}

/// `φ[i][j](y)` for `i <= N′`, `j < k`, with propagated radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiTable {
    pub y: f64,
    pub k: u32,
    pub nprime: usize,
    pub tail_cut: f64,
    /// `values[i][j]`; row 0 vanishes because `1/(sζ)` starts at `u`.
    pub values: Vec<Vec<f64>>,
    pub radii: Vec<Vec<f64>>,
}

impl PhiTable {
    /// `φ[i][j]`, zero for `j >= k` or `i > N′`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0.0)
    }

    pub fn radius(&self, i: usize, j: usize) -> f64 {
        self.radii.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0.0)
    }
}

/// `φ` at the default tolerance, doubling the prime-sum tail cut from its
/// default until every radius fits.
pub fn phi_table(y: f64, k: u32, nprime: usize) -> Result<PhiTable, AsymError> {
    let mut cut = default_tail_cut(y);
    loop {
        match phi_table_with(y, k, nprime, cut, DEFAULT_PHI_TOL) {
            Err(AsymError::Radius { .. }) if 2.0 * cut <= MAX_TAIL_CUT => cut *= 2.0,
            r => return r,
        }
    }
}

/// As [`phi_table`] with an explicit prime-sum tail cut and a relative
/// tolerance on every radius.
pub fn phi_table_with(y: f64, k: u32, nprime: usize, tail_cut: f64, tol: f64) -> Result<PhiTable, AsymError> {
    if !(1..=MAX_PHI_K).contains(&k) {
        return Err(AsymError::KOutOfRange { k, max: MAX_PHI_K });
    }
    if !(1..=MAX_PHI_ORDER).contains(&nprime) {
        return Err(AsymError::OrderOutOfRange {
            order: nprime,
            min: 1,
            max: MAX_PHI_ORDER,
        });
    }
    let km1 = (k - 1) as usize;
    let derivs = MixedDerivTable::compute(nprime - 1, km1, y, tail_cut)?;
    let (imax, jmax) = (nprime, km1);

    let inv = inv_s_zeta_series(imax)?.reshape(imax, jmax);
    let l_plus_delta = &BiSeries::l(imax, jmax) + &delta_series(imax)?.reshape(imax, jmax);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let pref = sign / factorial_f64(km1);

    let mut total = BiSeries::zeros(imax, jmax);
    let mut radius = BiSeries::zeros(imax, jmax);
    for l in 0..=km1 {
        let m = (&inv * &l_plus_delta.pow((km1 - l) as u32)).scale(pref * binom_f64(km1, l));
        let mut g = BiSeries::zeros(imax, jmax);
        let mut r = BiSeries::zeros(imax, jmax);
        for n in 0..nprime {
            let d = derivs.get(n, l);
            g.set(n, 0, d.value / factorial_f64(n));
            r.set(n, 0, d.radius / factorial_f64(n));
        }
        total = &total + &(&m * &g);
        radius = &radius + &(&m.abs() * &r);
    }

    let mut values = vec![vec![0.0; jmax + 1]; imax + 1];
    let mut radii = vec![vec![0.0; jmax + 1]; imax + 1];
    for i in 0..=imax {
        for j in 0..=jmax {
            let v = total.coeff(i, j);
            let r = radius.coeff(i, j) + 1e-14 * v.abs();
            let allowed = tol * v.abs().max(1.0);
            if r > allowed {
                return Err(AsymError::Radius { i, j, radius: r, tol: allowed });
            }
            values[i][j] = v;
            radii[i][j] = r;
        }
    }
    Ok(PhiTable {
        y,
        k,
        nprime,
        tail_cut,
        values,
        radii,
    })
}

/// Hankel coefficient `H(i,j) = (1/2πi) ∮ w^i (log w)^j e^w dw = Γ_{j,i−1}`.
pub fn hankel_coeff(i: usize, j: usize) -> Result<f64, AsymError> {
    if i == 0 || j > GAMMA_MAX_M || i - 1 > GAMMA_MAX_N {
        return Err(AsymError::MissingGamma { i, j });
    }
    Ok(gamma_mn_closed(j, i - 1)?)
}

/// `H(i,j)` by direct contour quadrature of `w^i (log w)^j e^w`.
pub fn hankel_coeff_quadrature(i: usize, j: usize, cutoff: f64) -> Result<f64, AsymError> {
    if i == 0 {
        return Err(AsymError::MissingGamma { i, j });
    }
    Ok(hankel_integral(j, i - 1, &HankelContourSpec::new(cutoff))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MainTermParams {
    pub x: f64,
    pub y: f64,
    pub k: u32,
    pub n: usize,
}

impl MainTermParams {
    pub fn new(x: f64, y: f64, k: u32, n: usize) -> Result<Self, AsymError> {
        if !(x >= 100.0) {
            return Err(AsymError::Params(format!("x = {x} must be at least 100")));
        }
        if !(y >= MIN_Y) {
            return Err(AsymError::Params(format!("y = {y} must be at least {MIN_Y}")));
        }
        if !(1..=MAX_PHI_K).contains(&k) {
            return Err(AsymError::KOutOfRange { k, max: MAX_PHI_K });
        }
        if !(1..=MAX_MAIN_N).contains(&n) {
            return Err(AsymError::OrderOutOfRange {
                order: n,
                min: 1,
                max: MAX_MAIN_N,
            });
        }
        Ok(Self { x, y, k, n })
    }
}

/// Main term from a precomputed table (which must reach order `n`).
pub fn main_term_from(phi: &PhiTable, x: f64, n: usize) -> Result<f64, AsymError> {
    if n > phi.nprime {
        return Err(AsymError::OrderOutOfRange {
            order: n,
            min: 1,
            max: phi.nprime,
        });
    }
    let lx = x.ln();
    let llx = lx.ln();
    let mut sum = 0.0;
    for i in 1..=n {
        let mut inner = 0.0;
        for big_j in 1..phi.k as usize {
            for j in 1..=big_j {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                inner += phi.get(i, big_j)
                    * sign
                    * binom_f64(big_j, j)
                    * hankel_coeff(i, j)?
                    * llx.powi((big_j - j) as i32);
            }
        }
        sum += inner / lx.powi(i as i32);
    }
    Ok(x / lx * sum)
}

/// The main term at `(x, y, k)` truncated at order `N`; zero for `k = 1`.
pub fn main_term(params: MainTermParams) -> Result<f64, AsymError> {
    let phi = phi_table(params.y, params.k, params.n + EXTRA_ORDERS)?;
    main_term_from(&phi, params.x, params.n)
}

/// Admissible `y` range `y <= min(Y₀ exp(p log x/(log log(x+1))^{1+ε}), x^{1/k})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub y0: f64,
    pub power: f64,
    pub epsilon: f64,
}

impl Default for Window {
    fn default() -> Self {
        Self {
            y0: 1.0,
            power: 1.0,
            epsilon: 0.1,
        }
    }
}

impl Window {
    pub fn exp_bound(&self, x: f64) -> f64 {
        self.y0 * (self.power * x.ln() / (x + 1.0).ln().ln().powf(1.0 + self.epsilon)).exp()
    }

    pub fn check(&self, x: f64, y: f64, k: u32) -> Result<(), AsymError> {
        if !(y >= MIN_Y) {
            return Err(AsymError::Params(format!("y = {y} must be at least {MIN_Y}")));
        }
        let root = x.powf(1.0 / k as f64);
        if y > root {
            return Err(AsymError::Window {
                x,
                y,
                bound: "x^(1/k)",
                value: root,
            });
        }
        let e = self.exp_bound(x);
        if y > e {
            return Err(AsymError::Window {
                x,
                y,
                bound: "Y0 exp(p log x / (log log(x+1))^(1+eps))",
                value: e,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    #[serde(serialize_with = "crate::report::display_string")]
    pub x: u64,
    #[serde(serialize_with = "crate::report::display_string")]
    pub exact: i64,
    pub main_term: f64,
    /// `|exact − main| log x / (x (log log(x+1))^{k−1} (log y/log x)^{N+1})`
    pub normalized_residual: f64,
}

pub fn normalized_residual(x: f64, y: f64, k: u32, n: usize, exact: f64, main: f64) -> f64 {
    let lx = x.ln();
    let scale = x * (x + 1.0).ln().ln().powi(k as i32 - 1) * (y.ln() / lx).powi(n as i32 + 1);
    (exact - main).abs() * lx / scale
}

/// Exact sums against the main term over a grid of `x`.
pub fn compare(sums: &SiftedSums, xs: &[u64], y: f64, k: u32, n: usize, window: &Window) -> Result<Vec<CompareRow>, AsymError> {
    for &x in xs {
        MainTermParams::new(x as f64, y, k, n)?;
        window.check(x as f64, y, k)?;
    }
    let exact = sums.mkw_grid(xs, y, k, None)?;
    let phi = phi_table(y, k, n + EXTRA_ORDERS)?;
    xs.iter()
        .zip(exact)
        .map(|(&x, e)| {
            let main = main_term_from(&phi, x as f64, n)?;
            Ok(CompareRow {
                x,
                exact: e,
                main_term: main,
                normalized_residual: normalized_residual(x as f64, y, k, n, e as f64, main),
            })
        })
        .collect()
}

/// Least-squares fit of `φ[i][j](y)` in powers of `log y` and `log log y`
/// up to `(log y)^{i+1} (log log y)^{k−1}`.
pub fn phi_fit(k: u32, i: usize, j: usize, ys: &[f64], basis: Option<FitBasis>) -> Result<FitResult, AsymError> {
    let basis = basis.unwrap_or(FitBasis::PolyLogYLogLog {
        degree: i + 1,
        loglog_degree: (k - 1) as usize,
    });
    let samples = ys
        .iter()
        .map(|&y| Ok((y, phi_table(y, k, i.max(1))?.get(i, j))))
        .collect::<Result<Vec<_>, AsymError>>()?;
    Ok(asymptotic_fit(&samples, basis)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{zeta, EULER_GAMMA};

    #[test]
    fn zeta_series_values() {
        let z = zeta_series(8).unwrap();
        assert_eq!(z.coeff(0, 0), 1.0);
        assert!((z.coeff(1, 0) - EULER_GAMMA).abs() < 1e-15);
        let u = 0.1;
        assert!((z.eval(u) - u * zeta(1.0 + u)).abs() < 1e-6);
    }

    #[test]
    fn delta_and_inverse() {
        let d = delta_series(8).unwrap();
        assert_eq!(d.coeff(0, 0), 0.0);
        assert!((d.coeff(1, 0) - EULER_GAMMA).abs() < 1e-15);
        assert!(d.exp().unwrap().max_abs_diff(&zeta_series(8).unwrap()) < 1e-14);
        let u: f64 = 0.01;
        assert!((d.eval(u) - (u * zeta(1.0 + u)).ln()).abs() < 1e-6);
        let inv = inv_s_zeta_series(8).unwrap();
        assert_eq!(inv.coeff(0, 0), 0.0);
        assert!((inv.coeff(1, 0) - 1.0).abs() < 1e-15);
        let u = 0.05;
        assert!((inv.eval(u) - 1.0 / ((1.0 + u) * zeta(1.0 + u))).abs() < 1e-6);
    }

    #[test]
    fn rejects_large_order() {
        assert!(matches!(zeta_series(9), Err(AsymError::SeriesOrder { .. })));
        assert!(matches!(phi_table(10.0, 5, 2), Err(AsymError::KOutOfRange { .. })));
    }

    #[test]
    fn lowest_term_at_k2() {
        // only source of u L: (1/(sζ))_1 · L · G_0(1,10,−1) with G_0 = −35/8
        let t = phi_table(10.0, 2, 3).unwrap();
        assert!((t.get(1, 1) + 4.375).abs() < 1e-12 + t.radius(1, 1), "{:?}", t.values);
        for i in 0..=3 {
            assert_eq!(t.get(i, 2), 0.0);
        }
        assert!(t.values[0].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn k1_has_no_l_column_and_no_main_term() {
        let t = phi_table(10.0, 1, 3).unwrap();
        assert_eq!(t.values[0].len(), 1);
        let p = MainTermParams::new(1e6, 10.0, 1, 2).unwrap();
        assert_eq!(main_term(p).unwrap(), 0.0);
    }

    #[test]
    fn single_term_main_at_k2() {
        let x: f64 = 1e7;
        let m = main_term(MainTermParams::new(x, 10.0, 2, 1).unwrap()).unwrap();
        let expect = x / x.ln().powi(2) * 4.375;
        assert!((m - expect).abs() < 1e-9 * expect, "{m} vs {expect}");
    }

    #[test]
    fn window_rejects_large_y() {
        let w = Window::default();
        assert!(matches!(
            w.check(1e4, 101.0, 2),
            Err(AsymError::Window { bound: "x^(1/k)", .. })
        ));
        assert!(w.check(1e6, 5.0, 2).is_ok());
    }
}
