//! Analytic constants: Bernoulli numbers, ζ at real arguments, Stieltjes
//! constants, derivatives of Γ at 1, and the reciprocal-gamma derivatives
//!
//! ```text
//! Γ_{m,N} = (d/dz)^m 1/Γ(-z) at z = N+1
//! ```
//!
//! by a closed form, by extrapolated finite differences and (through the
//! `hankel` module) by contour quadrature.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::{bell_complete, stirling1_unsigned, to_f64};
use crate::hankel::{hankel_integral, HankelContourSpec};
use crate::numeric::{
    circle_derivative, complex_gamma, extrapolated_derivative, factorial_f64, Extrapolated,
    KahanSum,
};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Highest `m` accepted by [`gamma_mn_closed`] and [`gamma_mn_oracle`].
pub const GAMMA_MAX_M: usize = 12;
/// Highest `N` accepted by [`gamma_mn_closed`] and [`gamma_mn_oracle`].
pub const GAMMA_MAX_N: usize = 8;
/// Highest Stieltjes index.
pub const STIELTJES_MAX: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum ConstError {
    #[error("zeta_at_integer needs n >= 2, got {0}")]
    ZetaDomain(i64),
    #[error("Γ_{{{m},{n}}} out of range (need m <= {GAMMA_MAX_M}, N <= {GAMMA_MAX_N})")]
    OutOfRange { m: usize, n: usize },
    #[error("stieltjes index {0} above {STIELTJES_MAX}")]
    StieltjesRange(usize),
    #[error("finite differences for Γ_{{{m},{n}}} did not converge (residual {residual:e})")]
    NoConvergence { m: usize, n: usize, residual: f64 },
    #[error("contour quadrature for Γ_{{{m},{n}}} failed: {reason}")]
    Contour { m: usize, n: usize, reason: String },
}

/// Exact Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_exact(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = BigRational::zero();
        let mut c = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(c.clone()) * bk;
            c = c * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `B_{2j}/(2j)!` for `j = 0..=count`, as floats.
fn bernoulli_over_factorial(count: usize) -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let b = bernoulli_exact(2 * 40);
        (0..=40)
            .map(|j| {
                let mut f = BigInt::one();
                for i in 1..=(2 * j) {
                    f *= BigInt::from(i);
                }
                (&b[2 * j] / BigRational::from_integer(f))
                    .to_f64()
                    .expect("finite")
            })
            .collect()
    });
    &t[..=count.min(40)]
}

const EM_CUT: u32 = 20;
const EM_TERMS: usize = 30;

/// ζ(s) for real `s > 0`, `s != 1`, by Euler–Maclaurin summation with
/// cutoff 20 and up to 30 correction terms.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 0.0 && s != 1.0, "zeta defined here for s > 0, s != 1");
    let n = EM_CUT as f64;
    let mut acc = KahanSum::new();
    for k in (1..EM_CUT).rev() {
        acc.add((k as f64).powf(-s));
    }
    acc.add(n.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * n.powf(-s));
    let bf = bernoulli_over_factorial(EM_TERMS);
    // rising factorial (s)_{2j-1} and power N^{-s-2j+1}
    let mut rising = s;
    let mut pow = n.powf(-s - 1.0);
    for (j, &b) in bf.iter().enumerate().skip(1) {
        let term = b * rising * pow;
        acc.add(term);
        if term.abs() < 1e-18 * acc.value().abs() {
            break;
        }
        let two_j = 2.0 * j as f64;
        rising *= (s + two_j - 1.0) * (s + two_j);
        pow /= n * n;
    }
    acc.value()
}

/// ζ(n) for integer `n >= 2`.
pub fn zeta_at_integer(n: i64) -> Result<f64, ConstError> {
    if n < 2 {
        return Err(ConstError::ZetaDomain(n));
    }
    if n > 60 {
        return Ok(1.0 + 2f64.powi(-(n as i32)));
    }
    Ok(zeta(n as f64))
}

/// Coefficients `a_i` of the m-th derivative of `x^{-1} (log x)^n`,
/// written as `x^{-1-m} sum_i a_i (log x)^i`.
fn log_power_derivative(n: usize, m: usize) -> Vec<f64> {
    let mut a = vec![0.0; n + 1];
    a[n] = 1.0;
    for d in 0..m {
        let mut next = vec![0.0; n + 1];
        let lead = -1.0 - d as f64;
        for i in 0..=n {
            next[i] += lead * a[i];
            if i > 0 {
                next[i - 1] += i as f64 * a[i];
            }
        }
        a = next;
    }
    a
}

/// Stieltjes constant γ_n from the limit definition
/// `γ_n = lim_M [sum_{k<=M} (log k)^n/k - (log M)^{n+1}/(n+1)]`,
/// accelerated by 20 Euler–Maclaurin correction terms at `M = 6`. The
/// correction series is asymptotic; at this cutoff 20 terms sit near its
/// smallest term, and the small `(log M)^{n+1}` keeps cancellation low.
pub fn stieltjes_const(n: usize) -> Result<f64, ConstError> {
    if n > STIELTJES_MAX {
        return Err(ConstError::StieltjesRange(n));
    }
    Ok(stieltjes_at_cutoff(n, 6, 20))
}

fn stieltjes_at_cutoff(n: usize, cutoff: u32, terms: usize) -> f64 {
    let mf = cutoff as f64;
    let lm = mf.ln();
    let mut acc = KahanSum::new();
    for k in (1..=cutoff).rev() {
        let lk = (k as f64).ln();
        acc.add(lk.powi(n as i32) / k as f64);
    }
    acc.add(-lm.powi(n as i32 + 1) / (n as f64 + 1.0));
    acc.add(-0.5 * lm.powi(n as i32) / mf);
    let bf = bernoulli_over_factorial(terms);
    for (j, &b) in bf.iter().enumerate().skip(1) {
        let order = 2 * j - 1;
        let coeffs = log_power_derivative(n, order);
        let poly: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| a * lm.powi(i as i32))
            .sum();
        acc.add(-b * poly * mf.powi(-(order as i32) - 1));
    }
    acc.value()
}

/// `Γ^{(j)}(1) = Y_j(x_1, ..., x_j)` with `x_1 = -γ` and
/// `x_i = (-1)^i (i-1)! ζ(i)`.
pub fn gamma_deriv_at_1(j: usize) -> f64 {
    gamma_deriv_at_1_with(j, &|i| zeta_at_integer(i as i64).expect("i >= 2"))
}

/// As [`gamma_deriv_at_1`] with caller-supplied ζ(i), `i >= 2`.
pub fn gamma_deriv_at_1_with(j: usize, zeta_i: &dyn Fn(usize) -> f64) -> f64 {
    let args: Vec<f64> = (1..=j)
        .map(|i| {
            if i == 1 {
                -EULER_GAMMA
            } else {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                sign * factorial_f64(i - 1) * zeta_i(i)
            }
        })
        .collect();
    bell_complete(j, &args)
}

fn check_range(m: usize, n: usize) -> Result<(), ConstError> {
    if m > GAMMA_MAX_M || n > GAMMA_MAX_N {
        return Err(ConstError::OutOfRange { m, n });
    }
    Ok(())
}

/// Closed form
///
/// ```text
/// Γ_{m,N} = (-1)^N sum_{i odd, i+j+k=m} m!/(i! j!) (-1)^{(i-1)/2} π^{i-1} Γ^{(j)}(1) c(N+2, k+1)
/// ```
///
/// from the Leibniz rule on `-sin(πz)/π · Γ(z-N) · z(z-1)...(z-N)`; the
/// falling factorial's k-th derivative at `N+1` is `k! c(N+2, k+1)`.
pub fn gamma_mn_closed(m: usize, n: usize) -> Result<f64, ConstError> {
    check_range(m, n)?;
    Ok(gamma_mn_closed_with(m, n, &|i| {
        zeta_at_integer(i as i64).expect("i >= 2")
    }))
}

/// Closed form with caller-supplied ζ(i), `i >= 2`.
pub fn gamma_mn_closed_with(m: usize, n: usize, zeta_i: &dyn Fn(usize) -> f64) -> f64 {
    let mut acc = KahanSum::new();
    for i in (1..=m).step_by(2) {
        for j in 0..=(m - i) {
            let k = m - i - j;
            let w = factorial_f64(m) / (factorial_f64(i) * factorial_f64(j));
            let sign = if (i - 1) / 2 % 2 == 0 { 1.0 } else { -1.0 };
            if k + 1 > n + 2 {
                continue;
            }
            let c = to_f64(&stirling1_unsigned(n + 2, k + 1).expect("in table"));
            acc.add(w * sign * PI.powi(i as i32 - 1) * gamma_deriv_at_1_with(j, zeta_i) * c);
        }
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * acc.value()
}

/// `1/Γ(-z)` at `z = N+1+t`, via `1/Γ(-z) = -sin(πz) Γ(1+z)/π`.
fn reciprocal_gamma_shifted(n: usize, t: f64) -> f64 {
    // sin(π(N+1+t)) = (-1)^{N+1} sin(πt), keeping t exact
    let sign = if (n + 1) % 2 == 0 { 1.0 } else { -1.0 };
    -sign * (PI * t).sin() * statrs::function::gamma::gamma(n as f64 + 2.0 + t) / PI
}

fn reciprocal_gamma_shifted_complex(n: usize, t: Complex64) -> Complex64 {
    let sign = if (n + 1) % 2 == 0 { 1.0 } else { -1.0 };
    -sign * (t * PI).sin() * complex_gamma(t + (n as f64 + 2.0)) / PI
}

/// Radius and node count of the two difference stencils compared by
/// [`gamma_mn_oracle`].
const ORACLE_STENCILS: [(f64, usize); 2] = [(1.0, 64), (0.8, 48)];

/// Γ_{m,N} by central differences of the reflected reciprocal gamma
/// function, taken over roots of unity around `z = N+1` (see
/// [`circle_derivative`]). Two stencils of different radius must agree.
pub fn gamma_mn_oracle(m: usize, n: usize) -> Result<f64, ConstError> {
    check_range(m, n)?;
    if m == 0 {
        return Ok(reciprocal_gamma_shifted(n, 0.0));
    }
    let [a, b] = ORACLE_STENCILS.map(|(r, k)| {
        circle_derivative(|t| reciprocal_gamma_shifted_complex(n, t), m, r, k).re
    });
    let residual = (a - b).abs();
    if !a.is_finite() || residual > 1e-9 * a.abs().max(1.0) {
        return Err(ConstError::NoConvergence { m, n, residual });
    }
    Ok(a)
}

/// Γ_{m,N} by Richardson-extrapolated central differences along the real
/// axis. Rounding limits this to about `1e-12 · Γ(N+4)` absolute
/// accuracy, so it serves as a coarse cross-check only.
pub fn gamma_mn_real_fd(m: usize, n: usize) -> Result<Extrapolated, ConstError> {
    check_range(m, n)?;
    Ok(extrapolated_derivative(
        |t| reciprocal_gamma_shifted(n, t),
        m,
        0.8,
        1.4,
        10,
    ))
}

/// Γ_{m,N} by quadrature over the truncated Hankel contour.
pub fn gamma_mn_contour(m: usize, n: usize, cutoff: f64) -> Result<f64, ConstError> {
    check_range(m, n)?;
    hankel_integral(m, n, &HankelContourSpec::new(cutoff)).map_err(|e| ConstError::Contour {
        m,
        n,
        reason: e.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaMethod {
    ClosedForm,
    FiniteDiff,
    Contour,
}

/// Γ_{m,N} values for `m <= max_m`, `N <= max_n` by one method.
#[derive(Debug, Clone, Serialize)]
pub struct GammaConstTable {
    pub method: GammaMethod,
    pub entries: BTreeMap<(usize, usize), f64>,
}

/// Arm length used for contour entries of [`GammaConstTable`].
pub const CONTOUR_CUTOFF: f64 = 40.0;

impl GammaConstTable {
    pub fn build(method: GammaMethod, max_m: usize, max_n: usize) -> Result<Self, ConstError> {
        let mut entries = BTreeMap::new();
        for m in 0..=max_m {
            for n in 0..=max_n {
                let v = match method {
                    GammaMethod::ClosedForm => gamma_mn_closed(m, n)?,
                    GammaMethod::FiniteDiff => gamma_mn_oracle(m, n)?,
                    GammaMethod::Contour => gamma_mn_contour(m, n, CONTOUR_CUTOFF)?,
                };
                entries.insert((m, n), v);
            }
        }
        Ok(Self { method, entries })
    }

    pub fn get(&self, m: usize, n: usize) -> Option<f64> {
        self.entries.get(&(m, n)).copied()
    }
}

/// π, γ, ζ(2..=max) and γ_0..=γ_8 in one place.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyticConstants {
    pub pi: f64,
    pub euler_gamma: f64,
    /// `zeta_int[i]` is ζ(i + 2).
    pub zeta_int: Vec<f64>,
    pub stieltjes: Vec<f64>,
    /// Decimal digits to which ζ(2) matches π²/6.
    pub precision: f64,
}

impl AnalyticConstants {
    pub fn compute(max_zeta: usize) -> Self {
        let zeta_int: Vec<f64> = (2..=max_zeta.max(2))
            .map(|i| zeta_at_integer(i as i64).expect("i >= 2"))
            .collect();
        let stieltjes = (0..=STIELTJES_MAX)
            .map(|n| stieltjes_const(n).expect("in range"))
            .collect();
        let err = (zeta_int[0] - PI * PI / 6.0).abs();
        let precision = if err == 0.0 { 16.0 } else { -(err / 1.644_934).log10() };
        Self {
            pi: PI,
            euler_gamma: EULER_GAMMA,
            zeta_int,
            stieltjes,
            precision,
        }
    }

    /// Shared instance with ζ(2..=16).
    pub fn shared() -> &'static AnalyticConstants {
        static C: OnceLock<AnalyticConstants> = OnceLock::new();
        C.get_or_init(|| AnalyticConstants::compute(16))
    }

    pub fn zeta(&self, i: usize) -> f64 {
        self.zeta_int[i - 2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_exact(8);
        let r = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
        assert_eq!(b[1], r(-1, 2));
        assert_eq!(b[2], r(1, 6));
        assert_eq!(b[3], r(0, 1));
        assert_eq!(b[4], r(-1, 30));
        assert_eq!(b[8], r(-1, 30));
    }

    #[test]
    fn euler_gamma_from_harmonic_numbers() {
        // H_n - log n - 1/(2n) + 1/(12 n^2) - 1/(120 n^4) -> γ with O(n^-6) error
        let n = 10_000u32;
        let h: f64 = crate::numeric::ksum((1..=n).rev().map(|k| 1.0 / k as f64));
        let nf = n as f64;
        let g = h - nf.ln() - 0.5 / nf + 1.0 / (12.0 * nf * nf) - 1.0 / (120.0 * nf.powi(4));
        assert!((g - EULER_GAMMA).abs() < 1e-13, "{g}");
        assert!((stieltjes_const(0).unwrap() - EULER_GAMMA).abs() < 1e-14);
    }

    #[test]
    fn zeta_exact_values() {
        assert!((zeta_at_integer(2).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta_at_integer(4).unwrap() - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta_at_integer(6).unwrap() - PI.powi(6) / 945.0).abs() < 1e-15);
        assert_eq!(zeta_at_integer(1), Err(ConstError::ZetaDomain(1)));
    }

    #[test]
    fn zeta_three_brackets() {
        // partial sum to K plus the integral tail bracket
        // 1/(2 (K+1)^2) < sum_{k>K} k^-3 < 1/(2 K^2)
        let k = 1_000_000u64;
        let s: f64 = crate::numeric::ksum((1..=k).rev().map(|i| (i as f64).powi(-3)));
        let lo = s + 0.5 / ((k + 1) as f64).powi(2);
        let hi = s + 0.5 / (k as f64).powi(2);
        let z3 = zeta_at_integer(3).unwrap();
        assert!(z3 > lo - 1e-15 && z3 < hi + 1e-15, "{lo} {z3} {hi}");
        assert!((z3 - 1.202_056_903_159_594).abs() < 1e-14);
    }

    #[test]
    fn stieltjes_against_plain_limit() {
        // direct sum to M = 1000 with hand-derived corrections up to f'''
        let m = 1000u32;
        let mf = m as f64;
        let l = mf.ln();
        for n in 1..=STIELTJES_MAX {
            let ni = n as i32;
            let nf = n as f64;
            let p = |e: i32| if e < 0 { 0.0 } else { l.powi(e) };
            let s = crate::numeric::ksum((1..=m).rev().map(|k| (k as f64).ln().powi(ni) / k as f64));
            let f = p(ni) / mf;
            let f1 = (nf * p(ni - 1) - p(ni)) / mf.powi(2);
            let f3 = (-6.0 * p(ni) + 11.0 * nf * p(ni - 1) - 6.0 * nf * (nf - 1.0) * p(ni - 2)
                + nf * (nf - 1.0) * (nf - 2.0) * p(ni - 3))
                / mf.powi(4);
            let g = s - p(ni + 1) / (nf + 1.0) - f / 2.0 - f1 / 12.0 + f3 / 720.0;
            let ours = stieltjes_const(n).unwrap();
            let tol = 1e-12 + 20.0 * f64::EPSILON * p(ni + 1);
            assert!((ours - g).abs() < tol, "n={n}: {ours} vs {g}");
        }
        // published values
        let published = [
            -0.072_815_845_483_676_72,
            -0.009_690_363_192_872_318,
            0.002_053_834_420_303_346,
            0.002_325_370_065_467_300,
            0.000_793_323_817_301_062_7,
            -0.000_238_769_345_430_199_6,
            -0.000_527_289_567_057_751_0,
            -0.000_352_123_353_803_039_5,
        ];
        for (i, &v) in published.iter().enumerate() {
            let ours = stieltjes_const(i + 1).unwrap();
            assert!((ours - v).abs() < 1e-10 * v.abs() + 1e-15, "γ_{}: {ours}", i + 1);
        }
    }

    #[test]
    fn stieltjes_rebuilds_zeta() {
        // ζ(s) = 1/(s-1) + sum_n (-1)^n γ_n (s-1)^n / n!
        let s = 1.5f64;
        let u = s - 1.0;
        let mut series = 1.0 / u;
        for n in 0..=STIELTJES_MAX {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            series += sign * stieltjes_const(n).unwrap() * u.powi(n as i32) / factorial_f64(n);
        }
        assert!((series - zeta(1.5)).abs() < 1e-8, "{series} vs {}", zeta(1.5));
    }

    #[test]
    fn gamma_derivatives_match_differences() {
        assert_eq!(gamma_deriv_at_1(0), 1.0);
        assert!((gamma_deriv_at_1(1) + EULER_GAMMA).abs() < 1e-15);
        let g2 = EULER_GAMMA * EULER_GAMMA + PI * PI / 6.0;
        assert!((gamma_deriv_at_1(2) - g2).abs() < 1e-14);
        for j in 1..=5 {
            let exact = gamma_deriv_at_1(j);
            let circle = circle_derivative(|t| complex_gamma(t + 1.0), j, 0.5, 64).re;
            assert!((circle - exact).abs() < 1e-8, "j={j}: {circle} vs {exact}");
            let real = extrapolated_derivative(
                |t| statrs::function::gamma::gamma(1.0 + t),
                j,
                0.3,
                1.3,
                14,
            );
            assert!((real.value - exact).abs() < 1e-5, "j={j}: {} vs {exact}", real.value);
        }
    }

    #[test]
    fn gamma_mn_spot_values() {
        for n in 0..=GAMMA_MAX_N {
            assert_eq!(gamma_mn_closed(0, n).unwrap(), 0.0);
            assert!(gamma_mn_oracle(0, n).unwrap().abs() < 1e-9);
        }
        assert!((gamma_mn_closed(1, 0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_mn_closed(1, 1).unwrap() + 2.0).abs() < 1e-14);
        assert!((gamma_mn_closed(2, 0).unwrap() - 2.0 * (1.0 - EULER_GAMMA)).abs() < 1e-14);
        assert!((gamma_mn_oracle(1, 0).unwrap() - 1.0).abs() < 1e-9);
        assert!((gamma_mn_oracle(1, 2).unwrap() - 6.0).abs() < 1e-8);
        assert_eq!(
            gamma_mn_closed(13, 0),
            Err(ConstError::OutOfRange { m: 13, n: 0 })
        );
    }

    #[test]
    fn closed_form_matches_differences() {
        for m in 0..=4 {
            for n in 0..=5 {
                let c = gamma_mn_closed(m, n).unwrap();
                let o = gamma_mn_oracle(m, n).unwrap();
                assert!((c - o).abs() < 1e-8, "({m},{n}): {c} vs {o}, diff {:e}", c - o);
                let r = gamma_mn_real_fd(m, n).unwrap();
                assert!(
                    (c - r.value).abs() < 1e-5 * c.abs().max(1.0),
                    "({m},{n}): {c} vs {}",
                    r.value
                );
            }
        }
    }

    #[test]
    fn closed_form_is_linear_in_zeta() {
        // perturbing ζ(i) by t moves Γ_{m,N} linearly: second difference ~ 0
        let base = |i: usize| zeta_at_integer(i as i64).unwrap();
        for (m, n) in [(3usize, 1usize), (4, 2)] {
            for target in 2..=m {
                let at = |t: f64| {
                    gamma_mn_closed_with(m, n, &|i| if i == target { base(i) + t } else { base(i) })
                };
                let (a, b, c) = (at(0.0), at(1e-3), at(2e-3));
                let second = (c - 2.0 * b + a).abs();
                assert!(second < 1e-9 * a.abs().max(1.0), "m={m} i={target}: {second}");
            }
        }
    }
}
