//! Exact sifted sums `M_{k,ω}(x,y) = Σ_{n≤x, p_1(n)>y} μ(n) binom(ω(n)−1, k−1)`,
//! the duality relations between smallest and largest prime factors,
//! residue-class series and the normalized size of `M_{k,ω}`.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::binom_conv;
use crate::numeric::KahanSum;
use crate::sieve::{FactorTable, Sieve, SieveCache, SieveError, INFINITY_MARK, SIEVE_HARD_MAX};

#[derive(Debug, Error)]
pub enum ExactSumError {
    #[error("invalid request: {0}")]
    Invalid(String),
    #[error("x = {x} exceeds the ceiling {ceiling}")]
    AboveCeiling { x: u64, ceiling: u64 },
    #[error("y = {y} outside [1.9, x^(1/k)] = [1.9, {max}]")]
    YOutOfRange { y: f64, max: f64 },
    #[error("sum overflowed 64 bits")]
    Overflow,
    #[error(transparent)]
    Sieve(#[from] SieveError),
}

/// Restrict to `n` whose least prime factor is `≡ l (mod m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResidueFilter {
    pub m: u64,
    pub l: u64,
}

impl ResidueFilter {
    pub fn new(m: u64, l: u64) -> Result<Self, ExactSumError> {
        if m == 0 {
            return Err(ExactSumError::Invalid("modulus must be positive".into()));
        }
        if l.gcd(&m) != 1 {
            return Err(ExactSumError::Invalid(format!("gcd({l}, {m}) != 1")));
        }
        Ok(Self { m, l: l % m })
    }

    /// `n = 1` (least prime factor ∞) passes only the trivial filter.
    fn admits(&self, lpf: u64) -> bool {
        if lpf == INFINITY_MARK {
            self.m == 1
        } else {
            lpf % self.m == self.l
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumRequest {
    pub x: u64,
    pub y: f64,
    pub k: u32,
    pub filter: Option<ResidueFilter>,
}

impl SumRequest {
    pub fn new(x: u64, y: f64, k: u32) -> Result<Self, ExactSumError> {
        if x < 1 {
            return Err(ExactSumError::Invalid("x must be at least 1".into()));
        }
        if k < 1 {
            return Err(ExactSumError::Invalid("k must be at least 1".into()));
        }
        if !y.is_finite() {
            return Err(ExactSumError::Invalid(format!("y = {y} is not finite")));
        }
        Ok(Self { x, y, k, filter: None })
    }

    pub fn with_filter(mut self, filter: ResidueFilter) -> Self {
        self.filter = Some(filter);
        self
    }
}

/// `μ(n) binom(ω(n)−1, k−1)`.
pub fn weight(mu: i8, omega: u8, k: u32) -> i64 {
    if mu == 0 {
        return 0;
    }
    i64::from(mu) * binom_conv(i64::from(omega) - 1, u64::from(k - 1)) as i64
}

/// Segment-parallel evaluator owning one [`Sieve`].
#[derive(Debug, Clone)]
pub struct SiftedSums {
    sieve: Sieve,
}

impl SiftedSums {
    /// Sieve able to reach `max_x`, cached under `ADL_CACHE_DIR` when set.
    pub fn new(max_x: u64) -> Self {
        Self::with_cache(max_x, SieveCache::from_env())
    }

    pub fn with_cache(max_x: u64, cache: Option<SieveCache>) -> Self {
        Self {
            sieve: Sieve::new(max_x.saturating_add(1)).with_cache(cache),
        }
    }

    pub fn with_sieve(sieve: Sieve) -> Self {
        Self { sieve }
    }

    pub fn sieve(&self) -> &Sieve {
        &self.sieve
    }

    fn check_x(&self, x: u64) -> Result<(), ExactSumError> {
        let ceiling = self.sieve.ceiling();
        if x > ceiling {
            return Err(ExactSumError::AboveCeiling { x, ceiling });
        }
        let reach = self.sieve.base().bound().saturating_add(1).saturating_pow(2);
        if x >= reach {
            return Err(ExactSumError::Invalid(format!(
                "sieve base reaches {}, too small for x = {x}",
                self.sieve.base().bound()
            )));
        }
        Ok(())
    }

    /// `M_{k,ω}(x, y)` at each `x` in `xs` (ascending), in one pass.
    pub fn mkw_grid(&self, xs: &[u64], y: f64, k: u32, filter: Option<ResidueFilter>) -> Result<Vec<i64>, ExactSumError> {
        let Some(&top) = xs.last() else {
            return Ok(Vec::new());
        };
        if xs.windows(2).any(|w| w[0] > w[1]) {
            return Err(ExactSumError::Invalid("x grid must be ascending".into()));
        }
        SumRequest::new(xs[0], y, k)?;
        self.check_x(top)?;
        let parts = self.sieve.map_segments(1, top + 1, |t| {
            let mut out = vec![0i64; xs.len()];
            let mut acc: i64 = 0;
            let mut next = 0;
            for (n, mu, omega, lpf) in t.iter() {
                while next < xs.len() && xs[next] < n {
                    out[next] = acc;
                    next += 1;
                }
                if mu != 0 && (lpf as f64) > y && filter.is_none_or(|f| f.admits(lpf)) {
                    acc = acc.checked_add(weight(mu, omega, k)).ok_or(ExactSumError::Overflow)?;
                }
            }
            for o in out.iter_mut().skip(next) {
                *o = acc;
            }
            Ok::<_, ExactSumError>(out)
        })?;
        let mut total = vec![0i64; xs.len()];
        for part in parts {
            for (t, v) in total.iter_mut().zip(part?) {
                *t = t.checked_add(v).ok_or(ExactSumError::Overflow)?;
            }
        }
        Ok(total)
    }

    pub fn mkw(&self, req: &SumRequest) -> Result<i64, ExactSumError> {
        Ok(self.mkw_grid(&[req.x], req.y, req.k, req.filter)?[0])
    }

    /// Partial sums `Σ_{n≤x, p_1(n)≡l (m)} μ(n) binom(ω(n)−1,k−1)/n` at each
    /// `x` in `xs` (ascending).
    pub fn residue_grid(&self, filter: ResidueFilter, k: u32, xs: &[u64]) -> Result<Vec<f64>, ExactSumError> {
        let Some(&top) = xs.last() else {
            return Ok(Vec::new());
        };
        if xs.windows(2).any(|w| w[0] > w[1]) {
            return Err(ExactSumError::Invalid("x grid must be ascending".into()));
        }
        SumRequest::new(xs[0], 0.0, k)?;
        self.check_x(top)?;
        let parts = self.sieve.map_segments(1, top + 1, |t| {
            let mut out = vec![0.0; xs.len()];
            let mut acc = KahanSum::new();
            let mut next = 0;
            for (n, mu, omega, lpf) in t.iter() {
                while next < xs.len() && xs[next] < n {
                    out[next] = acc.value();
                    next += 1;
                }
                if mu != 0 && filter.admits(lpf) {
                    acc.add(weight(mu, omega, k) as f64 / n as f64);
                }
            }
            for o in out.iter_mut().skip(next) {
                *o = acc.value();
            }
            out
        })?;
        let mut total = vec![KahanSum::new(); xs.len()];
        for part in parts {
            for (t, v) in total.iter_mut().zip(part) {
                t.add(v);
            }
        }
        Ok(total.iter().map(KahanSum::value).collect())
    }
}

/// `M_{k,ω}(x, y)` with a fresh sieve.
pub fn mkw_exact(req: &SumRequest) -> Result<i64, ExactSumError> {
    if req.x > SIEVE_HARD_MAX {
        return Err(ExactSumError::AboveCeiling {
            x: req.x,
            ceiling: SIEVE_HARD_MAX,
        });
    }
    SiftedSums::new(req.x).mkw(req)
}

/// Partial sum of the residue-class series up to `x`.
pub fn residue_series_partial(m: u64, l: u64, x: u64, k: u32) -> Result<f64, ExactSumError> {
    let filter = ResidueFilter::new(m, l)?;
    Ok(SiftedSums::new(x).residue_grid(filter, k, &[x])?[0])
}

/// The limit `(−1)^k/φ(m)` the residue series tends to.
pub fn residue_series_limit(m: u64, k: u32) -> f64 {
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign / euler_phi(m) as f64
}

pub fn euler_phi(m: u64) -> u64 {
    crate::sieve::distinct_prime_factors(m)
        .iter()
        .fold(m, |acc, p| acc / p * (p - 1))
}

/// `|M_{k,ω}(x,y)| / (x log y (log log(x+1))^{k−1})`.
pub fn upper_bound_ratio(x: u64, y: f64, k: u32) -> Result<f64, ExactSumError> {
    let req = SumRequest::new(x, y, k)?;
    check_ratio_range(x, y, k)?;
    let v = mkw_exact(&req)?;
    Ok(normalize(v, x, y, k))
}

fn check_ratio_range(x: u64, y: f64, k: u32) -> Result<(), ExactSumError> {
    let max = (x as f64).powf(1.0 / f64::from(k));
    if y < 1.9 || y > max {
        return Err(ExactSumError::YOutOfRange { y, max });
    }
    Ok(())
}

fn normalize(v: i64, x: u64, y: f64, k: u32) -> f64 {
    let xf = x as f64;
    (v as f64).abs() / (xf * y.ln() * (xf + 1.0).ln().ln().powi(k as i32 - 1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub x: u64,
    pub y: f64,
    pub k: u32,
    pub mkw: i64,
    pub ratio: f64,
}

/// Ratios over an `(x, y)` grid for one `k`, skipping `y > x^{1/k}`.
pub fn upper_bound_grid(xs: &[u64], ys: &[f64], k: u32) -> Result<Vec<RatioRow>, ExactSumError> {
    let mut sorted = xs.to_vec();
    sorted.sort_unstable();
    let Some(&top) = sorted.last() else {
        return Ok(Vec::new());
    };
    let sums = SiftedSums::new(top);
    let mut rows = Vec::new();
    for &y in ys {
        let vals = sums.mkw_grid(&sorted, y, k, None)?;
        for (&x, &v) in sorted.iter().zip(&vals) {
            if check_ratio_range(x, y, k).is_ok() {
                rows.push(RatioRow {
                    x,
                    y,
                    k,
                    mkw: v,
                    ratio: normalize(v, x, y, k),
                });
            }
        }
    }
    Ok(rows)
}

/// Prime-indexed test functions with `f(∞) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrimeFn {
    /// `p ↦ p`
    Identity,
    /// `p ↦ ⌊log p⌋`
    FloorLog,
    /// `p ↦ [p ≡ 1 mod 4]`
    OneModFour,
}

impl PrimeFn {
    pub const ALL: [PrimeFn; 3] = [PrimeFn::Identity, PrimeFn::FloorLog, PrimeFn::OneModFour];

    pub fn eval(self, p: u64) -> i64 {
        if p == INFINITY_MARK {
            return 0;
        }
        match self {
            Self::Identity => p as i64,
            Self::FloorLog => (p as f64).ln().floor() as i64,
            Self::OneModFour => i64::from(p % 4 == 1),
        }
    }
}

/// Both sides of both duality relations at one `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DualitySides {
    /// `Σ_{d|n} μ(d) binom(ω(d)−1,k−1) f(p_1(d))`
    pub smallest_lhs: i64,
    /// `(−1)^k f(P_k(n))`
    pub smallest_rhs: i64,
    /// `Σ_{d|n} μ(d) binom(ω(d)−1,k−1) f(P_1(d))`
    pub largest_lhs: i64,
    /// `(−1)^k f(p_k(n))`
    pub largest_rhs: i64,
}

impl DualitySides {
    pub fn holds(&self) -> (bool, bool) {
        (self.smallest_lhs == self.smallest_rhs, self.largest_lhs == self.largest_rhs)
    }
}

fn sign_k(k: u32) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Divisor-enumeration evaluation at `n` from its distinct primes (ascending).
pub fn duality_sides<F: Fn(u64) -> i64>(primes: &[u64], k: u32, f: F) -> DualitySides {
    assert!(k >= 1);
    let w = primes.len();
    let (mut small, mut large) = (0i64, 0i64);
    for mask in 0u32..(1 << w) {
        let omega = mask.count_ones();
        let mu = if omega % 2 == 0 { 1 } else { -1 };
        let c = binom_conv(i64::from(omega) - 1, u64::from(k - 1)) as i64;
        if c == 0 {
            continue;
        }
        let (lo, hi) = if mask == 0 {
            (INFINITY_MARK, INFINITY_MARK)
        } else {
            (primes[mask.trailing_zeros() as usize], primes[31 - mask.leading_zeros() as usize])
        };
        small += mu * c * f(lo);
        large += mu * c * f(hi);
    }
    let k = k as usize;
    let kth_largest = (k <= w).then(|| primes[w - k]);
    let kth_smallest = (k <= w).then(|| primes[k - 1]);
    // n = 1: P_1 = p_1 = ∞ and f(∞) = 0
    let rhs = |p: Option<u64>| p.map_or(0, |p| sign_k(k as u32) * f(p));
    DualitySides {
        smallest_lhs: small,
        smallest_rhs: rhs(kth_largest),
        largest_lhs: large,
        largest_rhs: rhs(kth_smallest),
    }
}

/// The two relations at `n`: `(p_1 inside / P_k outside, P_1 inside / p_k outside)`.
pub fn duality_check<F: Fn(u64) -> i64>(n: u64, k: u32, f: F) -> (bool, bool) {
    duality_sides(&crate::sieve::distinct_prime_factors(n), k, f).holds()
}

/// Distinct primes of `n` read off a factor table that covers `[1, n]`.
fn primes_from_table(t: &FactorTable, mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 1 {
        let p = t.lpf(n);
        out.push(p);
        while n % p == 0 {
            n /= p;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub max_n: u64,
    pub k: u32,
    pub f: PrimeFn,
    pub checked: u64,
    /// `n` failing the relation with `p_1` inside.
    pub smallest_failures: Vec<u64>,
    /// `n` failing the relation with `P_1` inside.
    pub largest_failures: Vec<u64>,
    /// `n` where the divisor enumeration and the multiples sweep disagree.
    pub route_mismatches: Vec<u64>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.smallest_failures.is_empty() && self.largest_failures.is_empty() && self.route_mismatches.is_empty()
    }
}

/// Left-hand sides for every `n <= max_n` by adding each squarefree `d`'s
/// term to all of its multiples.
fn sweep_lhs(t: &FactorTable, max_n: u64, k: u32, f: PrimeFn) -> (Vec<i64>, Vec<i64>) {
    let len = max_n as usize + 1;
    let mut small = vec![0i64; len];
    let mut large = vec![0i64; len];
    // P_1(d) for squarefree d, built as the largest prime of d
    for d in 1..=max_n {
        let mu = t.mu(d);
        if mu == 0 {
            continue;
        }
        let c = i64::from(mu) * binom_conv(i64::from(t.omega(d)) - 1, u64::from(k - 1)) as i64;
        if c == 0 {
            continue;
        }
        let lo = t.lpf(d);
        let hi = if d == 1 { INFINITY_MARK } else { *primes_from_table(t, d).last().expect("d > 1") };
        let (a, b) = (c * f.eval(lo), c * f.eval(hi));
        if a == 0 && b == 0 {
            continue;
        }
        let mut m = d;
        while m <= max_n {
            small[m as usize] += a;
            large[m as usize] += b;
            m += d;
        }
    }
    (small, large)
}

/// Check both relations for every `1 <= n <= max_n` by two routes.
pub fn duality_sweep(max_n: u64, k: u32, f: PrimeFn) -> Result<DualityReport, ExactSumError> {
    if max_n < 1 || k < 1 {
        return Err(ExactSumError::Invalid("need max_n >= 1 and k >= 1".into()));
    }
    let sieve = Sieve::new(max_n + 1).with_cache(None);
    let t = sieve.table(1, max_n + 1)?;
    let (small, large) = sweep_lhs(&t, max_n, k, f);
    let mut report = DualityReport {
        max_n,
        k,
        f,
        checked: max_n,
        smallest_failures: Vec::new(),
        largest_failures: Vec::new(),
        route_mismatches: Vec::new(),
    };
    for n in 1..=max_n {
        let s = duality_sides(&primes_from_table(&t, n), k, |p| f.eval(p));
        if s.smallest_lhs != small[n as usize] || s.largest_lhs != large[n as usize] {
            report.route_mismatches.push(n);
        }
        let (a, b) = s.holds();
        if !a {
            report.smallest_failures.push(n);
        }
        if !b {
            report.largest_failures.push(n);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_mkw(x: u64, y: f64, k: u32) -> i64 {
        (1..=x)
            .map(|n| {
                let ps = crate::sieve::distinct_prime_factors(n);
                let squarefree = ps.iter().product::<u64>() == n;
                let lpf = ps.first().copied().unwrap_or(INFINITY_MARK);
                if !squarefree || (lpf as f64) <= y {
                    return 0;
                }
                let mu = if ps.len() % 2 == 0 { 1 } else { -1 };
                weight(mu, ps.len() as u8, k)
            })
            .sum()
    }

    #[test]
    fn named_values() {
        assert_eq!(mkw_exact(&SumRequest::new(100, 11.0, 2).unwrap()).unwrap(), 0);
        assert_eq!(mkw_exact(&SumRequest::new(10, 1.9, 1).unwrap()).unwrap(), -1);
        assert_eq!(mkw_exact(&SumRequest::new(35, 2.0, 2).unwrap()).unwrap(), 4);
    }

    #[test]
    fn agrees_with_brute_force() {
        for (x, y, k) in [(500, 1.9, 1), (500, 3.0, 2), (1000, 5.0, 3), (777, 2.0, 2), (1, 5.0, 1), (1, 5.0, 2)] {
            assert_eq!(mkw_exact(&SumRequest::new(x, y, k).unwrap()).unwrap(), brute_mkw(x, y, k), "{x} {y} {k}");
        }
    }

    #[test]
    fn segment_partition_does_not_matter() {
        let xs = [1000, 5000, 20_000];
        let base = SiftedSums::with_cache(20_000, None).mkw_grid(&xs, 3.0, 2, None).unwrap();
        for seg in [7, 1000, 4096] {
            let s = SiftedSums::with_sieve(Sieve::new(20_001).with_segment_len(seg));
            assert_eq!(s.mkw_grid(&xs, 3.0, 2, None).unwrap(), base);
        }
    }

    #[test]
    fn duality_named_cases() {
        let s = duality_sides(&[2, 3], 1, |p| if p == INFINITY_MARK { 0 } else { 10 * p as i64 + 1 });
        assert_eq!(s.smallest_lhs, -31);
        assert_eq!(s.holds(), (true, true));
        let s = duality_sides(&[7], 2, |p| p as i64);
        assert_eq!((s.smallest_lhs, s.smallest_rhs, s.largest_lhs, s.largest_rhs), (0, 0, 0, 0));
        let s = duality_sides(&[2, 3, 5], 2, |p| if p == INFINITY_MARK { 0 } else { p as i64 });
        assert_eq!(s.smallest_lhs, 3);
        assert_eq!(s.smallest_rhs, 3);
        assert_eq!(duality_check(1, 1, |_| 0), (true, true));
    }

    #[test]
    fn residue_series_small_cases() {
        // 1 − 1/2 − 1/3 − 1/5 + 1/6 − 1/7 + 1/10
        let v = residue_series_partial(1, 0, 10, 1).unwrap();
        let direct = 1.0 - 0.5 - 1.0 / 3.0 - 0.2 + 1.0 / 6.0 - 1.0 / 7.0 + 0.1;
        assert!((v - direct).abs() < 1e-15);
        assert!(ResidueFilter::new(4, 2).is_err());
        // p_1(n) ≡ 1 mod 4, n ≤ 30: 5, 13, 17, 25(μ=0), 29
        let v = residue_series_partial(4, 1, 30, 1).unwrap();
        let direct = -(1.0 / 5.0 + 1.0 / 13.0 + 1.0 / 17.0 + 1.0 / 29.0);
        assert!((v - direct).abs() < 1e-15);
    }

    #[test]
    fn upper_bound_ratio_range() {
        assert!(matches!(upper_bound_ratio(100, 11.0, 2), Err(ExactSumError::YOutOfRange { .. })));
        assert!(upper_bound_ratio(10_000, 10.0, 2).unwrap() > 0.0);
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(4), 2);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(residue_series_limit(4, 1), -0.5);
        assert_eq!(residue_series_limit(4, 2), 0.5);
    }
}
