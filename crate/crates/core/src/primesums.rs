//! Prime sums at `s = 1`.
//!
//! * Mertens-type sums `M_N(y) = Σ_{p≤y} (log p)^N/(p−1)` and
//!   `Q_j(y) = Σ_{p≤y} (log p)^j/p`.
//! * `A(s) = Σ_{p>y} 1/(p^s−1) − log ζ(s) + 1` and its s-derivatives at
//!   `s = 1`, from the convergent rearrangement
//!   `A(s) = −Σ_{p≤y} p^{−s} + Σ_{p>y} 1/(p^s(p^s−1)) − Σ_p Σ_{m≥2} p^{−ms}/m + 1`.
//! * s-derivatives of `g(s,y,−1) = −Π_{p≤y}(1−p^{−s})^{−1}` and of
//!   `G_i(s,y,−1) = D_z^i g(s,y,z)|_{z=−1}` through the z-recursion
//!   `G_i = Σ_{l<i} C(i−1,l) h_{i−1−l} G_l` with `h_0 = A` and
//!   `h_r = r!(1 + (−1)^r Σ_{p>y} (p^s−1)^{−(r+1)})`.
//! * Least-squares fits in `log y` (and `log log y`).
//!
//! Sums over `p > y` stop at a finite `tail_cut`; the remainder is bounded
//! by `Σ_{n>P} (log n)^j/n^k <= ∫_P^∞ (log u)^j u^{−k} du`, which is
//! computed in closed form. Every value carries that bound plus a rounding
//! allowance as its radius.

use std::f64::consts::LN_2;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::{t_coeff, to_f64};
use crate::constants::EULER_GAMMA;
use crate::numeric::{binom_f64, factorial_f64, KahanSum};
use crate::sieve::{primes_up_to, sum_over_primes};

pub const MIN_Y: f64 = 1.9;
/// Largest power of `log p` in Mertens sums and continuation values.
pub const MAX_POWER: usize = 8;
pub const MAX_G_N: usize = 8;
/// Bounds on `(N, i)` for `D_s^N G_i`.
pub const MAX_MIXED_N: usize = 6;
pub const MAX_MIXED_I: usize = 4;
/// Largest tail cut reached by automatic doubling.
pub const MAX_TAIL_CUT: f64 = 1e9;

const EPS: f64 = f64::EPSILON;
/// Rounding allowance per unit of `Σ|term|`.
const ROUNDING: f64 = 64.0 * EPS;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrimeSumError {
    #[error("y = {0} is below the supported minimum 1.9")]
    YTooSmall(f64),
    #[error("power {power} outside 0..={max}")]
    PowerOutOfRange { power: usize, max: usize },
    #[error("(N, i) = ({n}, {i}) outside N <= {max_n}, i <= {max_i}")]
    IndexOutOfRange {
        n: usize,
        i: usize,
        max_n: usize,
        max_i: usize,
    },
    #[error("tail cut {tail_cut} must be at least max(y, {min}) (y = {y})")]
    TailCut { tail_cut: f64, y: f64, min: f64 },
    #[error("tolerance {tol:e} unreachable: certified radius {radius:e} at tail cut {tail_cut:e}")]
    ToleranceUnreachable { tol: f64, radius: f64, tail_cut: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("{got} samples for {params} parameters; need at least {need}")]
    TooFewSamples { got: usize, params: usize, need: usize },
    #[error("samples span {decades:.2} decades of y; need at least 3")]
    NarrowSpan { decades: f64 },
    #[error("ill-conditioned basis (singular value ratio {ratio:e}); widen the y span or lower the degree")]
    IllConditioned { ratio: f64 },
    #[error("sample y = {0} must exceed e so that log log y is defined and positive")]
    BadSample(f64),
}

/// A value with a certified error radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certified {
    pub value: f64,
    pub radius: f64,
}

impl Certified {
    pub fn new(value: f64, radius: f64) -> Self {
        Self { value, radius }
    }

    pub fn exact(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    pub fn add(self, o: Self) -> Self {
        let v = self.value + o.value;
        Self::new(v, self.radius + o.radius + EPS * v.abs())
    }

    pub fn mul(self, o: Self) -> Self {
        let v = self.value * o.value;
        let r = self.value.abs() * o.radius + o.value.abs() * self.radius + self.radius * o.radius;
        Self::new(v, r + EPS * v.abs())
    }

    pub fn scale(self, c: f64) -> Self {
        Self::new(c * self.value, c.abs() * self.radius)
    }

    /// Whether `x` lies within the radius, with slack for rounding.
    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.radius + 4.0 * EPS * x.abs().max(self.value.abs())
    }

    pub fn require(self, tol: f64, tail_cut: f64) -> Result<Self, PrimeSumError> {
        if self.radius <= tol {
            Ok(self)
        } else {
            Err(PrimeSumError::ToleranceUnreachable {
                tol,
                radius: self.radius,
                tail_cut,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MertensKind {
    /// `Σ_{p≤y} (log p)^N / (p−1)`
    M,
    /// `Σ_{p≤y} (log p)^j / p`
    Q,
}

impl FromStr for MertensKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "M" | "m" => Ok(Self::M),
            "Q" | "q" => Ok(Self::Q),
            other => Err(format!("unknown Mertens kind {other:?}; expected M or Q")),
        }
    }
}

fn check_y(y: f64) -> Result<(), PrimeSumError> {
    if y >= MIN_Y {
        Ok(())
    } else {
        Err(PrimeSumError::YTooSmall(y))
    }
}

fn check_power(power: usize) -> Result<(), PrimeSumError> {
    if power <= MAX_POWER {
        Ok(())
    } else {
        Err(PrimeSumError::PowerOutOfRange {
            power,
            max: MAX_POWER,
        })
    }
}

/// `(−log p)^j` for `j = 0..=max`.
fn neg_log_powers(p: u64, max: usize) -> Vec<f64> {
    let nl = -(p as f64).ln();
    let mut out = Vec::with_capacity(max + 1);
    let mut x = 1.0;
    for _ in 0..=max {
        out.push(x);
        x *= nl;
    }
    out
}

/// The sum for every power `0..=max_power` at once.
pub fn mertens_sums(kind: MertensKind, max_power: usize, y: f64) -> Result<Vec<f64>, PrimeSumError> {
    check_y(y)?;
    check_power(max_power)?;
    Ok(mertens_interval(kind, max_power, 0.0, y))
}

fn mertens_interval(kind: MertensKind, max_power: usize, a: f64, b: f64) -> Vec<f64> {
    sum_over_primes(a, b, max_power + 1, |p, out| {
        let lp = (p as f64).ln();
        let den = match kind {
            MertensKind::M => (p - 1) as f64,
            MertensKind::Q => p as f64,
        };
        let mut x = 1.0 / den;
        for o in out.iter_mut() {
            *o = x;
            x *= lp;
        }
    })
}

/// `M_N(y)` or `Q_j(y)`: an exact finite sum, compensated.
pub fn mertens_sum(kind: MertensKind, power: usize, y: f64) -> Result<f64, PrimeSumError> {
    Ok(mertens_sums(kind, power, y)?[power])
}

/// The sum of one power at each `y` in `ys` (ascending), in one sweep.
pub fn mertens_series(kind: MertensKind, power: usize, ys: &[f64]) -> Result<Vec<f64>, PrimeSumError> {
    check_power(power)?;
    let mut out = Vec::with_capacity(ys.len());
    let mut acc = KahanSum::new();
    let mut prev = 0.0;
    for &y in ys {
        check_y(y)?;
        assert!(y >= prev, "mertens_series needs ascending y");
        acc.add(mertens_interval(kind, power, prev, y)[power]);
        out.push(acc.value());
        prev = y;
    }
    Ok(out)
}

/// `Π_{p≤y} (1 − 1/p)`.
pub fn mertens_product(y: f64) -> f64 {
    let s = sum_over_primes(0.0, y, 1, |p, out| out[0] = (-1.0 / p as f64).ln_1p());
    s[0].exp()
}

/// `e^γ log y Π_{p≤y}(1 − 1/p) − 1`, which tends to 0.
pub fn mertens_product_defect(y: f64) -> f64 {
    EULER_GAMMA.exp() * y.ln() * mertens_product(y) - 1.0
}

/// `∫_a^∞ (ln u)^j u^{−k} du = a^{1−k} Σ_{i≤j} j!/i! (ln a)^i/(k−1)^{j+1−i}` for `k >= 2`.
pub fn log_power_tail(j: usize, k: usize, a: f64) -> f64 {
    assert!(k >= 2 && a > 1.0);
    let la = a.ln();
    let km1 = (k - 1) as f64;
    let mut acc = KahanSum::new();
    let mut coef = 1.0; // j!/i!, built downward from i = j
    for i in (0..=j).rev() {
        acc.add(coef * la.powi(i as i32) / km1.powi((j + 1 - i) as i32));
        coef *= i as f64;
    }
    a.powf(1.0 - k as f64) * acc.value()
}

/// Smallest tail cut for which `(ln u)^j u^{−k}` is decreasing past it
/// for every `j <= max_j`, `k >= 2`, so the integral dominates the sum.
fn min_tail_cut(max_j: usize) -> f64 {
    (max_j as f64 / 2.0).exp().ceil() + 1.0
}

/// Default cut `max(10^6, 100 y)`.
pub fn default_tail_cut(y: f64) -> f64 {
    (100.0 * y).max(1e6)
}

fn check_tail(y: f64, tail_cut: f64, max_j: usize) -> Result<(), PrimeSumError> {
    let min = min_tail_cut(max_j);
    if tail_cut >= y && tail_cut >= min && tail_cut <= MAX_TAIL_CUT {
        Ok(())
    } else {
        Err(PrimeSumError::TailCut { tail_cut, y, min })
    }
}

/// Coefficients of `D_s^j (p^s − 1)^{−n} = (−log p)^j Σ_{k=n}^{n+j} a_k (p^s − 1)^{−k}`,
/// indexed from `k = n`. For `n = 1` these are `T_{j,k}`.
pub fn inverse_power_coeffs(n: usize, j: usize) -> Vec<f64> {
    let mut a = vec![1.0];
    for _ in 0..j {
        let mut next = vec![0.0; a.len() + 1];
        for (idx, &c) in a.iter().enumerate() {
            let k = (n + idx) as f64;
            next[idx] += k * c;
            next[idx + 1] += k * c;
        }
        a = next;
    }
    a
}

fn t_row(j: usize) -> Vec<f64> {
    (1..=j + 1)
        .map(|k| to_f64(&t_coeff(j, k).expect("j <= 63")))
        .collect()
}

/// Tail of `Σ_{p>P} (log p)^j Σ_k c_k (p−1)^{−k}` (k starting at `k0 >= 2`).
fn inverse_power_tail(j: usize, k0: usize, coeffs: &[f64], p_cut: f64) -> f64 {
    let shift = (p_cut + 1.0) / p_cut;
    coeffs
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            let k = k0 + idx;
            c * shift.powi(k as i32) * log_power_tail(j, k, p_cut)
        })
        .sum()
}

/// `C_j(P) = Σ_{m≥2} m^{j−1} P^{2−m}`, so that for `p > P`
/// `Σ_{m≥2} (m log p)^j/(m p^m) <= C_j(P) (log p)^j / p^2`.
fn prime_power_factor(j: usize, p_cut: f64) -> f64 {
    let mut acc = 0.0;
    let mut m = 2.0f64;
    loop {
        let t = m.powi(j as i32 - 1) * p_cut.powf(2.0 - m);
        acc += t;
        if t < 1e-30 * acc {
            // remaining terms shrink by at least half each step
            return acc + 2.0 * t;
        }
        m += 1.0;
    }
}

/// `Σ_{m≥2} (−m log p)^j/(m p^m)` for all `j <= max_j`, with a bound on the
/// dropped remainder of the m-series.
fn prime_power_row(p: u64, max_j: usize, sums: &mut [f64], rem: &mut [f64], abs: &mut [f64]) {
    let pf = p as f64;
    let lp = pf.ln();
    let mut pm = 1.0 / (pf * pf);
    let mut m = 2usize;
    loop {
        let mf = m as f64;
        let base = pm / mf;
        let x = -mf * lp;
        let mut t = base;
        let mut worst: f64 = 0.0;
        for j in 0..=max_j {
            sums[j] += t;
            abs[j] += t.abs();
            worst = worst.max(t.abs() / abs[j].max(f64::MIN_POSITIVE));
            t *= x;
        }
        // ratio of successive |terms| at the largest j, decreasing in m
        let ratio = ((mf + 1.0) / mf).powi(max_j as i32 - 1) / pf;
        if ratio <= 0.75 && worst < 1e-18 {
            let next = pm / pf / (mf + 1.0);
            let xn = (mf + 1.0) * lp;
            for (j, r) in rem.iter_mut().enumerate().take(max_j + 1) {
                *r += next * xn.powi(j as i32) / (1.0 - ratio);
            }
            return;
        }
        pm /= pf;
        m += 1;
    }
}

/// `D_s^j A(s)|_{s=1}` for `j = 0..=max_j`, each with a certified radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuationValues {
    pub y: f64,
    pub tail_cut: f64,
    pub values: Vec<Certified>,
    /// Truncation part of each radius (tails past the cut).
    pub tail_bounds: Vec<f64>,
}

pub fn continuation_values(max_j: usize, y: f64, tail_cut: f64) -> Result<ContinuationValues, PrimeSumError> {
    check_y(y)?;
    check_power(max_j)?;
    check_tail(y, tail_cut, max_j)?;
    let w = max_j + 1;
    let rows: Vec<Vec<f64>> = (0..=max_j).map(t_row).collect();
    // layout: [small | big | pp | pp_rem | abs] each of width w
    let sums = sum_over_primes(0.0, tail_cut, 5 * w, |p, out| {
        let (small, rest) = out.split_at_mut(w);
        let (big, rest) = rest.split_at_mut(w);
        let (pp, rest) = rest.split_at_mut(w);
        let (rem, abs) = rest.split_at_mut(w);
        let pw = neg_log_powers(p, max_j);
        let pf = p as f64;
        if pf <= y {
            for j in 0..w {
                small[j] = pw[j] / pf;
                abs[j] += small[j].abs();
            }
        } else {
            let inv = 1.0 / (pf - 1.0);
            for j in 0..w {
                let mut s = 1.0 / (pf * (pf - 1.0));
                let mut ik = inv * inv;
                for &t in &rows[j][1..] {
                    s += t * ik;
                    ik *= inv;
                }
                big[j] = pw[j] * s;
                abs[j] += big[j].abs();
            }
        }
        prime_power_row(p, max_j, pp, rem, abs);
    });
    let (small, rest) = sums.split_at(w);
    let (big, rest) = rest.split_at(w);
    let (pp, rest) = rest.split_at(w);
    let (rem, abs) = rest.split_at(w);

    let mut values = Vec::with_capacity(w);
    let mut tail_bounds = Vec::with_capacity(w);
    for j in 0..w {
        let mut v = KahanSum::new();
        v.add(-small[j]);
        v.add(big[j]);
        v.add(-pp[j]);
        if j == 0 {
            v.add(1.0);
        }
        // 1/(p(p−1)) and the k >= 2 terms are all <= (p−1)^{-k}
        let mut coeffs = rows[j].clone();
        coeffs[0] = 1.0;
        let big_tail = inverse_power_tail(j, 2, &coeffs[..1], tail_cut)
            + inverse_power_tail(j, 2, &coeffs[1..], tail_cut);
        let pp_tail = prime_power_factor(j, tail_cut) * log_power_tail(j, 2, tail_cut);
        let tail = big_tail + pp_tail + rem[j];
        tail_bounds.push(tail);
        values.push(Certified::new(v.value(), tail + ROUNDING * (abs[j] + 1.0)));
    }
    Ok(ContinuationValues {
        y,
        tail_cut,
        values,
        tail_bounds,
    })
}

/// `D_s^j (Σ_{p>y} 1/(p^s−1) − log ζ(s) + 1)` at `s = 1` with certified radius.
pub fn continuation_value(j: usize, y: f64, tail_cut: f64) -> Result<Certified, PrimeSumError> {
    Ok(continuation_values(j, y, tail_cut)?.values[j])
}

/// As [`continuation_value`], doubling the tail cut from the default
/// until the radius is at most `tol`.
pub fn continuation_value_within(j: usize, y: f64, tol: f64) -> Result<Certified, PrimeSumError> {
    let mut cut = default_tail_cut(y);
    loop {
        let v = continuation_value(j, y, cut)?;
        if v.radius <= tol || 2.0 * cut > MAX_TAIL_CUT {
            return v.require(tol, cut);
        }
        cut *= 2.0;
    }
}

/// `L_j = D_s^j [−Σ_{p≤y} log p/(p^s−1)]` at `s = 1`, `j < n`.
fn log_derivative_sums(n: usize, y: f64) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let rows: Vec<Vec<f64>> = (0..n).map(t_row).collect();
    sum_over_primes(0.0, y, n, |p, out| {
        let pw = neg_log_powers(p, n);
        let inv = 1.0 / (p as f64 - 1.0);
        for j in 0..n {
            let mut s = 0.0;
            let mut ik = inv;
            for &t in &rows[j] {
                s += t * ik;
                ik *= inv;
            }
            out[j] = pw[j + 1] * s;
        }
    })
}

/// `D_s^n g(1,y,−1)` for `n = 0..=max_n`, with
/// `g(s,y,−1) = −Π_{p≤y}(1−p^{−s})^{−1}` and `g' = L g`.
pub fn g_derivs(max_n: usize, y: f64) -> Result<Vec<f64>, PrimeSumError> {
    check_y(y)?;
    if max_n > MAX_G_N {
        return Err(PrimeSumError::PowerOutOfRange {
            power: max_n,
            max: MAX_G_N,
        });
    }
    let l = log_derivative_sums(max_n, y);
    let mut g = vec![-1.0 / mertens_product(y)];
    for n in 1..=max_n {
        let v = ksum((0..n).map(|j| binom_f64(n - 1, j) * l[j] * g[n - 1 - j]));
        g.push(v);
    }
    Ok(g)
}

fn ksum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    crate::numeric::ksum(it)
}

/// `D_s^n g(1,y,−1)`: finite sums only.
pub fn g_deriv(n: usize, y: f64) -> Result<f64, PrimeSumError> {
    Ok(g_derivs(n, y)?[n])
}

/// `D_s^j h_r(s)|_{s=1}` for `r = 0..max_i`, `j = 0..=max_n`, where
/// `h_0 = A` and `h_r = r!(1 + (−1)^r Σ_{p>y}(p^s−1)^{−(r+1)})`.
fn h_table(max_n: usize, max_i: usize, y: f64, tail_cut: f64) -> Result<Vec<Vec<Certified>>, PrimeSumError> {
    let cont = continuation_values(max_n, y, tail_cut)?;
    let mut table = vec![cont.values];
    if max_i <= 1 {
        return Ok(table);
    }
    let coeffs: Vec<Vec<Vec<f64>>> = (1..max_i)
        .map(|r| (0..=max_n).map(|j| inverse_power_coeffs(r + 1, j)).collect())
        .collect();
    let w = (max_i - 1) * (max_n + 1);
    let sums = sum_over_primes(y, tail_cut, 2 * w, |p, out| {
        let pw = neg_log_powers(p, max_n);
        let inv = 1.0 / (p as f64 - 1.0);
        let (vals, abs) = out.split_at_mut(w);
        for (ri, rows) in coeffs.iter().enumerate() {
            let r = ri + 1;
            let start = inv.powi(r as i32 + 1);
            for (j, row) in rows.iter().enumerate() {
                let mut s = 0.0;
                let mut ik = start;
                for &c in row {
                    s += c * ik;
                    ik *= inv;
                }
                let idx = ri * (max_n + 1) + j;
                vals[idx] = pw[j] * s;
                abs[idx] = vals[idx].abs();
            }
        }
    });
    for (ri, rows) in coeffs.iter().enumerate() {
        let r = ri + 1;
        let rf = factorial_f64(r);
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        let mut out = Vec::with_capacity(max_n + 1);
        for (j, row) in rows.iter().enumerate() {
            let idx = ri * (max_n + 1) + j;
            let tail = inverse_power_tail(j, r + 1, row, tail_cut);
            let base = if j == 0 { 1.0 } else { 0.0 };
            let v = base + sign * sums[idx];
            let rad = tail + ROUNDING * (sums[w + idx] + 1.0);
            out.push(Certified::new(rf * v, rf * rad));
        }
        table.push(out);
    }
    Ok(table)
}

/// `D_s^n G_i(1,y,−1)` for all `n <= max_n`, `i <= max_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedDerivTable {
    pub y: f64,
    pub tail_cut: f64,
    /// `values[n][i]`
    pub values: Vec<Vec<Certified>>,
    /// `h[r][j] = D_s^j h_r(1)`
    h: Vec<Vec<Certified>>,
}

impl MixedDerivTable {
    pub fn compute(max_n: usize, max_i: usize, y: f64, tail_cut: f64) -> Result<Self, PrimeSumError> {
        check_y(y)?;
        if max_n > MAX_MIXED_N || max_i > MAX_MIXED_I {
            return Err(PrimeSumError::IndexOutOfRange {
                n: max_n,
                i: max_i,
                max_n: MAX_MIXED_N,
                max_i: MAX_MIXED_I,
            });
        }
        check_tail(y, tail_cut, max_n)?;
        let g = g_derivs(max_n, y)?;
        let h = h_table(max_n, max_i, y, tail_cut)?;
        // cols[i][n]
        let mut cols: Vec<Vec<Certified>> = vec![g
            .iter()
            .enumerate()
            .map(|(n, &v)| Certified::new(v, 1e-14 * (n + 1) as f64 * v.abs()))
            .collect()];
        for i in 1..=max_i {
            let col = (0..=max_n)
                .map(|n| {
                    let (lead, inner) = split_term(&h, &cols, n, i);
                    lead.add(inner)
                })
                .collect();
            cols.push(col);
        }
        let values = (0..=max_n)
            .map(|n| (0..=max_i).map(|i| cols[i][n]).collect())
            .collect();
        Ok(Self {
            y,
            tail_cut,
            values,
            h,
        })
    }

    pub fn get(&self, n: usize, i: usize) -> Certified {
        self.values[n][i]
    }

    /// `D_s^j h_r(1)`: `r = 0` is the continuation value, `r >= 1` the
    /// inner sums `r!(1 + (−1)^r Σ_{p>y}(p^s−1)^{−(r+1)})`.
    pub fn h(&self, r: usize, j: usize) -> Certified {
        self.h[r][j]
    }

    /// `D_s^n G_i` split into the leading term
    /// `Σ_j C(n,j) D^j A · D^{n−j} G_{i−1}` and the rest, for `i >= 1`.
    pub fn split(&self, n: usize, i: usize) -> (Certified, Certified) {
        assert!(i >= 1);
        let cols: Vec<Vec<Certified>> = (0..i)
            .map(|l| (0..=n).map(|m| self.values[m][l]).collect())
            .collect();
        split_term(&self.h, &cols, n, i)
    }
}

fn split_term(h: &[Vec<Certified>], cols: &[Vec<Certified>], n: usize, i: usize) -> (Certified, Certified) {
    let mut lead = Certified::exact(0.0);
    let mut inner = Certified::exact(0.0);
    for l in 0..i {
        let c = binom_f64(i - 1, l);
        let r = i - 1 - l;
        for j in 0..=n {
            let term = h[r][j].mul(cols[l][n - j]).scale(c * binom_f64(n, j));
            if r == 0 {
                lead = lead.add(term);
            } else {
                inner = inner.add(term);
            }
        }
    }
    (lead, inner)
}

/// `D_s^n G_i(1,y,−1)` with certified radius.
pub fn mixed_deriv(n: usize, i: usize, y: f64, tail_cut: f64) -> Result<Certified, PrimeSumError> {
    Ok(MixedDerivTable::compute(n, i, y, tail_cut)?.get(n, i))
}

/// As [`mixed_deriv`], doubling the tail cut until the radius is `<= tol`.
pub fn mixed_deriv_within(n: usize, i: usize, y: f64, tol: f64) -> Result<Certified, PrimeSumError> {
    let mut cut = default_tail_cut(y);
    loop {
        let v = mixed_deriv(n, i, y, cut)?;
        if v.radius <= tol || 2.0 * cut > MAX_TAIL_CUT {
            return v.require(tol, cut);
        }
        cut *= 2.0;
    }
}

/// `g(1,y,z)` straight from the Euler product
/// `z^{−1} Π_{p≤y}(1−1/p)^z Π_{p>y}(1+z/p)(1−1/p)^z`, truncated at a cut.
///
/// This route never touches the z-recursion, so finite differences in z
/// give an independent value of `G_i(1,y,−1)`.
#[derive(Debug, Clone)]
pub struct EulerProduct {
    y: f64,
    /// `Σ_{p≤P} ln(1−1/p)`
    log_mertens: f64,
    /// primes in `(y, P]`
    large: Vec<f64>,
    tail_cut: f64,
}

impl EulerProduct {
    pub fn new(y: f64, tail_cut: f64) -> Result<Self, PrimeSumError> {
        check_y(y)?;
        check_tail(y, tail_cut, 0)?;
        let primes = primes_up_to(tail_cut);
        let log_mertens = crate::numeric::ksum(primes.primes().iter().map(|&p| (-1.0 / p as f64).ln_1p()));
        let large = primes.between(y, tail_cut).iter().map(|&p| p as f64).collect();
        Ok(Self {
            y,
            log_mertens,
            large,
            tail_cut,
        })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Truncated `g(1,y,z)` for real `z` with `|z| < y`, `z != 0`.
    pub fn value(&self, z: f64) -> f64 {
        let s = crate::numeric::ksum(self.large.iter().map(|&p| (z / p).ln_1p()));
        (z * self.log_mertens + s).exp() / z
    }

    /// Bound on `|d/dz log g_full − d/dz log g_trunc|` for `|z| <= 2`:
    /// the dropped factor is `Π_{p>P}(1+z/p)(1−1/p)^z` and
    /// `|1/(p+z) + ln(1−1/p)| <= 4/p^2` there.
    pub fn log_derivative_tail(&self) -> f64 {
        4.0 * log_power_tail(0, 2, self.tail_cut)
    }
}

/// Bound of the paper's tail estimate for the `k >= 2` terms:
/// `25 ((j+2)!)^2 (⌈log y⌉/log 2)^{j+1} / ((j+2) y)`.
pub fn xi_bound(j: usize, y: f64) -> f64 {
    let f = factorial_f64(j + 2);
    25.0 * f * f * (y.ln().ceil() / LN_2).powi(j as i32 + 1) / ((j + 2) as f64 * y)
}

/// Measured `Σ_{y<p≤P} (log p)^{j+1} Σ_{k≥2} T_{j,k}/(p−1)^k`.
pub fn xi_measured(j: usize, y: f64, tail_cut: f64) -> f64 {
    let row = t_row(j);
    sum_over_primes(y, tail_cut, 1, |p, out| {
        let lp = (p as f64).ln();
        let inv = 1.0 / (p as f64 - 1.0);
        let mut ik = inv * inv;
        let mut s = 0.0;
        for &t in &row[1..] {
            s += t * ik;
            ik *= inv;
        }
        out[0] = lp.powi(j as i32 + 1) * s;
    })[0]
}

/// Everything above for one `y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeSumProfile {
    pub y: f64,
    pub tail_cut: f64,
    pub mertens_m: Vec<f64>,
    pub mertens_q: Vec<f64>,
    pub cont: Vec<Certified>,
    /// `g_derivs[n][i] = D_s^n G_i(1,y,−1)`
    pub g_derivs: Vec<Vec<f64>>,
    pub g_radii: Vec<Vec<f64>>,
    pub tail_bounds: Vec<f64>,
}

impl PrimeSumProfile {
    pub fn compute(y: f64, max_n: usize, max_i: usize, tail_cut: f64) -> Result<Self, PrimeSumError> {
        let table = MixedDerivTable::compute(max_n, max_i, y, tail_cut)?;
        let cont = continuation_values(max_n, y, tail_cut)?;
        Ok(Self {
            y,
            tail_cut,
            mertens_m: mertens_sums(MertensKind::M, max_n, y)?,
            mertens_q: mertens_sums(MertensKind::Q, max_n, y)?,
            cont: cont.values,
            g_derivs: table.values.iter().map(|r| r.iter().map(|c| c.value).collect()).collect(),
            g_radii: table.values.iter().map(|r| r.iter().map(|c| c.radius).collect()).collect(),
            tail_bounds: cont.tail_bounds,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FitBasis {
    /// `Σ_{n≤d} c_n (log y)^n`
    PolyLogY { degree: usize },
    /// `Σ_{n≤d} Σ_{j≤e} c_{n,j} (log y)^n (log log y)^j`
    PolyLogYLogLog { degree: usize, loglog_degree: usize },
}

impl FitBasis {
    /// `(n, j)` exponent pairs, in coefficient order.
    pub fn terms(&self) -> Vec<(usize, usize)> {
        match *self {
            Self::PolyLogY { degree } => (0..=degree).map(|n| (n, 0)).collect(),
            Self::PolyLogYLogLog {
                degree,
                loglog_degree,
            } => (0..=degree)
                .flat_map(|n| (0..=loglog_degree).map(move |j| (n, j)))
                .collect(),
        }
    }

    pub fn degree(&self) -> usize {
        match *self {
            Self::PolyLogY { degree } | Self::PolyLogYLogLog { degree, .. } => degree,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub basis: FitBasis,
    pub degree: usize,
    pub terms: Vec<(usize, usize)>,
    pub coeffs: Vec<f64>,
    pub ys: Vec<f64>,
    /// `value − fit` per sample
    pub residuals: Vec<f64>,
}

impl FitResult {
    /// Coefficient of `(log y)^n (log log y)^j`, if in the basis.
    pub fn coeff(&self, n: usize, j: usize) -> Option<f64> {
        self.terms.iter().position(|&t| t == (n, j)).map(|i| self.coeffs[i])
    }

    /// Coefficient of `(log y)^degree`.
    pub fn leading(&self) -> f64 {
        self.coeff(self.degree, 0).expect("leading term present")
    }

    pub fn eval(&self, y: f64) -> f64 {
        let (l, ll) = (y.ln(), y.ln().ln());
        self.terms
            .iter()
            .zip(&self.coeffs)
            .map(|(&(n, j), c)| c * l.powi(n as i32) * ll.powi(j as i32))
            .sum()
    }

    /// Root-mean-square residual over the first and last `w` samples.
    pub fn end_residuals(&self, w: usize) -> (f64, f64) {
        let w = w.clamp(1, self.residuals.len().max(1));
        let rms = |xs: &[f64]| (xs.iter().map(|r| r * r).sum::<f64>() / xs.len() as f64).sqrt();
        let n = self.residuals.len();
        (rms(&self.residuals[..w]), rms(&self.residuals[n - w..]))
    }

    /// Whether residuals at the largest y are below those at the smallest.
    /// Least-squares residuals oscillate, so single points are noisy; the
    /// comparison uses the RMS over three samples at each end.
    pub fn residuals_shrink(&self) -> bool {
        let (lo, hi) = self.end_residuals(3);
        hi < lo
    }
}

/// Largest singular value ratio accepted by [`asymptotic_fit`].
pub const MAX_CONDITION: f64 = 1e10;

/// Least-squares fit of `samples = (y, value)` in the given basis.
pub fn asymptotic_fit(samples: &[(f64, f64)], basis: FitBasis) -> Result<FitResult, FitError> {
    let terms = basis.terms();
    let need = basis.degree() + 3;
    let need = need.max(terms.len() + 1);
    if samples.len() < need {
        return Err(FitError::TooFewSamples {
            got: samples.len(),
            params: terms.len(),
            need,
        });
    }
    if let Some(&(y, _)) = samples.iter().find(|(y, _)| *y <= std::f64::consts::E) {
        return Err(FitError::BadSample(y));
    }
    let (ymin, ymax) = samples
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &(y, _)| (a.min(y), b.max(y)));
    let decades = (ymax / ymin).log10();
    if decades < 3.0 - 1e-9 {
        return Err(FitError::NarrowSpan { decades });
    }
    let rows = samples.len();
    let cols = terms.len();
    let mut a = DMatrix::<f64>::zeros(rows, cols);
    for (r, &(y, _)) in samples.iter().enumerate() {
        let (l, ll) = (y.ln(), y.ln().ln());
        for (c, &(n, j)) in terms.iter().enumerate() {
            a[(r, c)] = l.powi(n as i32) * ll.powi(j as i32);
        }
    }
    // equilibrate columns before judging conditioning
    let scales: Vec<f64> = (0..cols).map(|c| a.column(c).amax().max(f64::MIN_POSITIVE)).collect();
    for (c, s) in scales.iter().enumerate() {
        a.column_mut(c).scale_mut(1.0 / s);
    }
    let b = DVector::from_iterator(rows, samples.iter().map(|&(_, v)| v));
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let ratio = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if ratio > MAX_CONDITION {
        return Err(FitError::IllConditioned { ratio });
    }
    let x = svd.solve(&b, 0.0).expect("U and V were computed");
    let coeffs: Vec<f64> = x.iter().zip(&scales).map(|(v, s)| v / s).collect();
    let fitted = &a * &x;
    let residuals = b.iter().zip(fitted.iter()).map(|(v, f)| v - f).collect();
    Ok(FitResult {
        basis,
        degree: basis.degree(),
        terms,
        coeffs,
        ys: samples.iter().map(|&(y, _)| y).collect(),
        residuals,
    })
}

/// `count` points from `lo` to `hi`, evenly spaced in `log y`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::extrapolated_derivative;

    #[test]
    fn named_mertens_values() {
        let m1 = mertens_sum(MertensKind::M, 1, 10.0).unwrap();
        let direct = 2f64.ln() + 3f64.ln() / 2.0 + 5f64.ln() / 4.0 + 7f64.ln() / 6.0;
        assert!((m1 - direct).abs() < 1e-15);
        assert!((m1 - 1.969_131_161_178_41).abs() < 1e-14);
        assert_eq!(mertens_sum(MertensKind::Q, 0, 2.0).unwrap(), 0.5);
        assert_eq!(mertens_sum(MertensKind::Q, 0, 1.95).unwrap(), 0.0);
        assert!(mertens_sum(MertensKind::M, 9, 10.0).is_err());
        assert!(mertens_sum(MertensKind::M, 1, 1.5).is_err());
    }

    #[test]
    fn series_matches_pointwise() {
        let ys = [10.0, 100.0, 1000.0];
        let s = mertens_series(MertensKind::M, 2, &ys).unwrap();
        for (y, v) in ys.iter().zip(s) {
            assert!((v - mertens_sum(MertensKind::M, 2, *y).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn log_power_tail_matches_quadrature() {
        for (j, k, a) in [(0usize, 2usize, 10.0f64), (3, 2, 50.0), (2, 3, 20.0), (5, 4, 100.0)] {
            // substitute u = a e^t: ∫_0^∞ (ln a + t)^j a^{1−k} e^{(1−k)t} dt
            let n = 200_000;
            let h = 60.0 / n as f64;
            let f = |t: f64| (a.ln() + t).powi(j as i32) * a.powf(1.0 - k as f64) * ((1.0 - k as f64) * t).exp();
            let mut s = 0.5 * (f(0.0) + f(60.0));
            for i in 1..n {
                s += f(i as f64 * h);
            }
            let quad = s * h;
            let exact = log_power_tail(j, k, a);
            assert!((quad - exact).abs() < 1e-6 * exact, "{j} {k} {a}: {quad} vs {exact}");
        }
    }

    #[test]
    fn inverse_power_coeffs_for_n1_are_t() {
        for j in 0..=6 {
            assert_eq!(inverse_power_coeffs(1, j), t_row(j));
        }
    }

    #[test]
    fn inverse_power_coeffs_match_fd() {
        let p = 7.0f64;
        for n in 1..=3 {
            for j in 1..=3 {
                let fd = extrapolated_derivative(|t| (p.powf(1.0 + t) - 1.0).powi(-(n as i32)), j, 0.1, 1.6, 10);
                let c = inverse_power_coeffs(n, j);
                let inv = 1.0 / (p - 1.0);
                let closed = (-p.ln()).powi(j as i32)
                    * c.iter()
                        .enumerate()
                        .map(|(i, a)| a * inv.powi((n + i) as i32))
                        .sum::<f64>();
                assert!((fd.value - closed).abs() < 1e-8 * closed.abs(), "n={n} j={j}");
            }
        }
    }

    #[test]
    fn g_derivative_named_values() {
        assert_eq!(g_deriv(0, 10.0).unwrap(), -4.375);
        assert_eq!(g_deriv(0, 1.9).unwrap(), -1.0);
        let g1 = g_deriv(1, 10.0).unwrap();
        let m1 = mertens_sum(MertensKind::M, 1, 10.0).unwrap();
        assert!((g1 - m1 * 4.375).abs() < 1e-13);
        assert!((g1 - 8.615).abs() < 1e-3);
    }

    #[test]
    fn g_derivatives_match_fd_in_s() {
        let y = 30.0;
        let primes: Vec<f64> = primes_up_to(y).primes().iter().map(|&p| p as f64).collect();
        let g = |t: f64| -primes.iter().map(|p| 1.0 / (1.0 - p.powf(-1.0 - t))).product::<f64>();
        let d = g_derivs(4, y).unwrap();
        for (n, &v) in d.iter().enumerate() {
            let fd = extrapolated_derivative(g, n, 0.05, 1.6, 10);
            assert!((fd.value - v).abs() < 1e-7 * v.abs().max(1.0), "n={n}: {} vs {v}", fd.value);
        }
    }

    #[test]
    fn continuation_j0_tends_to_one_minus_gamma() {
        let mut prev = f64::INFINITY;
        for y in [1e3, 1e4, 1e5, 1e6] {
            let v = continuation_value(0, y, default_tail_cut(y)).unwrap();
            let dev = (v.value + y.ln().ln() - (1.0 - EULER_GAMMA)).abs();
            assert!(dev < prev, "y={y}: {dev}");
            prev = dev;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn radius_covers_doubled_cut() {
        for j in 0..=4 {
            let a = continuation_value(j, 100.0, 1e5).unwrap();
            let b = continuation_value(j, 100.0, 4e5).unwrap();
            assert!(a.contains(b.value), "j={j}: {a:?} vs {b:?}");
            assert!(b.radius < a.radius);
        }
    }

    #[test]
    fn zero_tail_inner_term_is_r_factorial() {
        let t = MixedDerivTable::compute(1, 3, 50.0, 1e5).unwrap();
        // h_r(1) = r!(1 + (−1)^r Σ ...) is close to r! for large y
        for r in 1..3 {
            let v = t.h(r, 0);
            assert!((v.value / factorial_f64(r) - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn g0_column_is_g_deriv() {
        let t = MixedDerivTable::compute(3, 2, 10.0, 1e6).unwrap();
        let g = g_derivs(3, 10.0).unwrap();
        for n in 0..=3 {
            assert_eq!(t.get(n, 0).value, g[n]);
        }
        let c = continuation_value(0, 10.0, 1e6).unwrap();
        let v = t.get(0, 1);
        assert!((v.value - c.value * g[0]).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_bad_input() {
        let few: Vec<(f64, f64)> = [1e3, 1e4].iter().map(|&y| (y, 1.0)).collect();
        assert!(matches!(
            asymptotic_fit(&few, FitBasis::PolyLogY { degree: 1 }),
            Err(FitError::TooFewSamples { .. })
        ));
        let narrow: Vec<(f64, f64)> = log_grid(1e3, 1e5, 8).into_iter().map(|y| (y, y.ln())).collect();
        assert!(matches!(
            asymptotic_fit(&narrow, FitBasis::PolyLogY { degree: 1 }),
            Err(FitError::NarrowSpan { .. })
        ));
        let ok: Vec<(f64, f64)> = log_grid(1e3, 1e7, 9)
            .into_iter()
            .map(|y| (y, 2.0 + 3.0 * y.ln() - 0.5 * y.ln().powi(2)))
            .collect();
        let f = asymptotic_fit(&ok, FitBasis::PolyLogY { degree: 2 }).unwrap();
        assert!((f.leading() + 0.5).abs() < 1e-9);
        assert!((f.coeff(0, 0).unwrap() - 2.0).abs() < 1e-7);
    }
}
