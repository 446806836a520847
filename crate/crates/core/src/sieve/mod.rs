//! Segmented sieve for the Möbius function, the number of distinct prime
//! factors and the least prime factor over a contiguous range.
//!
//! Every other module reduces over [`FactorTable`] segments, so the
//! output must not depend on how a range is cut into segments.

mod cache;

pub use cache::{decode_table, encode_table, SieveCache, CACHE_MAGIC, CACHE_VERSION};

use rayon::prelude::*;
use thiserror::Error;

use crate::numeric::KahanSum;

/// Least prime factor recorded for `n = 1`. Strictly larger than any `n`
/// the sieve can handle, so `lpf(1) > y` holds for every `y`.
pub const INFINITY_MARK: u64 = u64::MAX;

/// Default number of integers per segment.
pub const DEFAULT_SEGMENT_LEN: u64 = 1 << 20;

/// Hard upper limit on sieved integers.
pub const SIEVE_HARD_MAX: u64 = 1_000_000_000;

#[derive(Debug, Error)]
pub enum SieveError {
    #[error("invalid range [{lo}, {hi}): need 1 <= lo < hi")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("base prime list only covers primes <= {have}; range [{lo}, {hi}) needs primes <= {need}")]
    InsufficientBase { have: u64, need: u64, lo: u64, hi: u64 },
    #[error("range end {hi} exceeds the sieve ceiling {ceiling}")]
    AboveCeiling { hi: u64, ceiling: u64 },
    #[error("sieve cache {path}: {reason}")]
    Cache { path: String, reason: String },
    #[error("sieve cache {path}: checksum mismatch, file is corrupted")]
    Checksum { path: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Exactly the primes up to `bound`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeList {
    bound: u64,
    primes: Vec<u64>,
}

impl PrimeList {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Primes `<= y`.
    pub fn up_to(&self, y: f64) -> &[u64] {
        let cut = self.primes.partition_point(|&p| (p as f64) <= y);
        &self.primes[..cut]
    }

    /// Primes in the half-open interval `(a, b]`.
    pub fn between(&self, a: f64, b: f64) -> &[u64] {
        let lo = self.primes.partition_point(|&p| (p as f64) <= a);
        let hi = self.primes.partition_point(|&p| (p as f64) <= b);
        &self.primes[lo..hi.max(lo)]
    }
}

/// Integer square root, floor.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes in `[lo, hi)` using `base`, which must contain every prime
/// `<= sqrt(hi - 1)`.
fn primes_in_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut m = start;
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|&(i, &c)| !c && lo + i as u64 >= 2)
        .map(|(i, _)| lo + i as u64)
        .collect()
}

/// All primes `p <= y`.
pub fn primes_up_to(y: f64) -> PrimeList {
    let bound = if y < 2.0 { y.max(0.0).floor() as u64 } else { y.floor() as u64 };
    let root = isqrt(bound);
    let base = small_primes(root);
    let seg = DEFAULT_SEGMENT_LEN;
    let ranges: Vec<(u64, u64)> = (0..=bound / seg)
        .map(|i| (i * seg, ((i + 1) * seg).min(bound + 1)))
        .filter(|(a, b)| a < b)
        .collect();
    let chunks: Vec<Vec<u64>> = ranges
        .par_iter()
        .map(|&(a, b)| primes_in_segment(a, b, &base))
        .collect();
    PrimeList {
        bound,
        primes: chunks.concat(),
    }
}

/// Sums of `width` functions over the primes in `(a, b]`, without holding
/// the prime list. `f(p, out)` adds its terms into `out`. Segments are
/// evaluated in parallel and combined in range order, so the result is
/// the same for any thread count.
pub fn sum_over_primes<F>(a: f64, b: f64, width: usize, f: F) -> Vec<f64>
where
    F: Fn(u64, &mut [f64]) + Sync,
{
    if !(b > a) || b < 2.0 {
        return vec![0.0; width];
    }
    let lo = if a < 0.0 { 0 } else { a.floor() as u64 + 1 };
    let hi = b.floor() as u64 + 1;
    let base = small_primes(isqrt(hi));
    let parts: Vec<Vec<f64>> = segment_ranges(lo.max(1), hi, DEFAULT_SEGMENT_LEN)
        .into_par_iter()
        .map(|(s, e)| {
            let mut acc = vec![KahanSum::new(); width];
            let mut buf = vec![0.0; width];
            for p in primes_in_segment(s, e, &base) {
                buf.iter_mut().for_each(|x| *x = 0.0);
                f(p, &mut buf);
                for (k, x) in acc.iter_mut().zip(&buf) {
                    k.add(*x);
                }
            }
            acc.iter().map(KahanSum::value).collect()
        })
        .collect();
    let mut total = vec![KahanSum::new(); width];
    for part in &parts {
        for (k, x) in total.iter_mut().zip(part) {
            k.add(*x);
        }
    }
    total.iter().map(KahanSum::value).collect()
}

/// Per-integer arithmetic data for `n` in `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorTable {
    pub(crate) lo: u64,
    pub(crate) hi: u64,
    pub(crate) mu: Vec<i8>,
    pub(crate) omega: Vec<u8>,
    pub(crate) lpf: Vec<u64>,
}

impl FactorTable {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    fn index(&self, n: u64) -> usize {
        assert!(
            n >= self.lo && n < self.hi,
            "{n} outside table range [{}, {})",
            self.lo,
            self.hi
        );
        (n - self.lo) as usize
    }

    pub fn mu(&self, n: u64) -> i8 {
        self.mu[self.index(n)]
    }

    pub fn omega(&self, n: u64) -> u8 {
        self.omega[self.index(n)]
    }

    pub fn lpf(&self, n: u64) -> u64 {
        self.lpf[self.index(n)]
    }

    pub fn mu_slice(&self) -> &[i8] {
        &self.mu
    }

    pub fn omega_slice(&self) -> &[u8] {
        &self.omega
    }

    pub fn lpf_slice(&self) -> &[u64] {
        &self.lpf
    }

    /// Iterator of `(n, mu, omega, lpf)`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i8, u8, u64)> + '_ {
        (0..self.len()).map(move |i| (self.lo + i as u64, self.mu[i], self.omega[i], self.lpf[i]))
    }

    /// Concatenate adjacent tables in range order.
    pub fn concat(parts: &[FactorTable]) -> Option<FactorTable> {
        let first = parts.first()?;
        let mut out = FactorTable {
            lo: first.lo,
            hi: first.lo,
            mu: Vec::new(),
            omega: Vec::new(),
            lpf: Vec::new(),
        };
        for t in parts {
            if t.lo != out.hi {
                return None;
            }
            out.hi = t.hi;
            out.mu.extend_from_slice(&t.mu);
            out.omega.extend_from_slice(&t.omega);
            out.lpf.extend_from_slice(&t.lpf);
        }
        Some(out)
    }
}

/// Sieve `[lo, hi)` for mu, omega and the least prime factor.
pub fn build_segment(lo: u64, hi: u64, base: &PrimeList) -> Result<FactorTable, SieveError> {
    if lo < 1 || lo >= hi {
        return Err(SieveError::InvalidRange { lo, hi });
    }
    let need = isqrt(hi - 1);
    if base.bound < need {
        return Err(SieveError::InsufficientBase {
            have: base.bound,
            need,
            lo,
            hi,
        });
    }
    let len = (hi - lo) as usize;
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut mu = vec![1i8; len];
    let mut omega = vec![0u8; len];
    let mut lpf = vec![0u64; len];

    for &p in base.primes.iter().take_while(|&&p| p <= need) {
        let pp = p * p;
        let mut m = lo.div_ceil(p) * p;
        while m < hi {
            let i = (m - lo) as usize;
            if lpf[i] == 0 {
                lpf[i] = p;
            }
            omega[i] += 1;
            let mut r = rem[i] / p;
            if m % pp == 0 {
                mu[i] = 0;
                while r % p == 0 {
                    r /= p;
                }
            } else {
                mu[i] = -mu[i];
            }
            rem[i] = r;
            m += p;
        }
    }
    for i in 0..len {
        if rem[i] > 1 {
            // cofactor is a single prime above sqrt(hi - 1)
            omega[i] += 1;
            mu[i] = -mu[i];
            if lpf[i] == 0 {
                lpf[i] = rem[i];
            }
        }
    }
    if lo == 1 {
        lpf[0] = INFINITY_MARK;
    }
    Ok(FactorTable {
        lo,
        hi,
        mu,
        omega,
        lpf,
    })
}

/// Cut `[lo, hi)` into consecutive segments of at most `seg_len` integers.
pub fn segment_ranges(lo: u64, hi: u64, seg_len: u64) -> Vec<(u64, u64)> {
    let seg_len = seg_len.max(1);
    let mut out = Vec::new();
    let mut a = lo;
    while a < hi {
        let b = (a + seg_len).min(hi);
        out.push((a, b));
        a = b;
    }
    out
}

/// Segmented driver: owns a base prime list, a segment size and an
/// optional on-disk cache, and maps a function over the segments of a
/// range in parallel. Results come back in range order.
#[derive(Debug, Clone)]
pub struct Sieve {
    base: PrimeList,
    segment_len: u64,
    ceiling: u64,
    cache: Option<SieveCache>,
}

impl Sieve {
    /// A sieve able to handle integers below `limit`.
    pub fn new(limit: u64) -> Self {
        Self {
            base: primes_up_to(isqrt(limit.max(2)) as f64 + 1.0),
            segment_len: DEFAULT_SEGMENT_LEN,
            ceiling: SIEVE_HARD_MAX,
            cache: None,
        }
    }

    pub fn with_segment_len(mut self, len: u64) -> Self {
        self.segment_len = len.max(1);
        self
    }

    pub fn with_cache(mut self, cache: Option<SieveCache>) -> Self {
        self.cache = cache;
        self
    }

    pub fn with_ceiling(mut self, ceiling: u64) -> Self {
        self.ceiling = ceiling.min(SIEVE_HARD_MAX);
        self
    }

    pub fn ceiling(&self) -> u64 {
        self.ceiling
    }

    pub fn base(&self) -> &PrimeList {
        &self.base
    }

    pub fn segment_len(&self) -> u64 {
        self.segment_len
    }

    fn check(&self, hi: u64) -> Result<(), SieveError> {
        if hi > self.ceiling + 1 {
            return Err(SieveError::AboveCeiling {
                hi,
                ceiling: self.ceiling,
            });
        }
        Ok(())
    }

    /// One segment, read from the cache when present.
    pub fn table(&self, lo: u64, hi: u64) -> Result<FactorTable, SieveError> {
        self.check(hi)?;
        match &self.cache {
            Some(cache) => cache.get_or_build(lo, hi, &self.base),
            None => build_segment(lo, hi, &self.base),
        }
    }

    /// Apply `f` to every segment of `[lo, hi)`; outputs in range order.
    pub fn map_segments<T, F>(&self, lo: u64, hi: u64, f: F) -> Result<Vec<T>, SieveError>
    where
        T: Send,
        F: Fn(&FactorTable) -> T + Sync,
    {
        self.check(hi)?;
        segment_ranges(lo, hi, self.segment_len)
            .into_par_iter()
            .map(|(a, b)| self.table(a, b).map(|t| f(&t)))
            .collect()
    }
}

/// Distinct prime factors of `n`, ascending, by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Smallest,
    Largest,
}

/// k-th smallest or k-th largest distinct prime factor of `n`.
///
/// `None` when `n` has fewer than `k` distinct prime factors. For `n = 1`
/// and `k = 1` the answer is [`INFINITY_MARK`] in either direction, so
/// `f(p_1(1)) = f(P_1(1)) = f(infinity)`.
pub fn kth_prime_factor(n: u64, k: usize, direction: Direction) -> Option<u64> {
    assert!(n >= 1 && k >= 1, "kth_prime_factor needs n >= 1 and k >= 1");
    if n == 1 {
        return (k == 1).then_some(INFINITY_MARK);
    }
    let ps = distinct_prime_factors(n);
    if ps.len() < k {
        return None;
    }
    Some(match direction {
        Direction::Smallest => ps[k - 1],
        Direction::Largest => ps[ps.len() - k],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(n: u64) -> (i8, u8, u64) {
        if n == 1 {
            return (1, 0, INFINITY_MARK);
        }
        let mut m = n;
        let mut omega = 0u8;
        let mut squarefree = true;
        let mut lpf = 0;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                if lpf == 0 {
                    lpf = p;
                }
                omega += 1;
                m /= p;
                if m % p == 0 {
                    squarefree = false;
                    while m % p == 0 {
                        m /= p;
                    }
                }
            }
            p += 1;
        }
        if m > 1 {
            omega += 1;
            if lpf == 0 {
                lpf = m;
            }
        }
        let mu = if squarefree {
            if omega % 2 == 0 {
                1
            } else {
                -1
            }
        } else {
            0
        };
        (mu, omega, lpf)
    }

    #[test]
    fn named_values() {
        let base = primes_up_to(100.0);
        let t = build_segment(1, 100, &base).unwrap();
        assert_eq!((t.mu(1), t.omega(1), t.lpf(1)), (1, 0, INFINITY_MARK));
        assert_eq!((t.mu(12), t.omega(12), t.lpf(12)), (0, 2, 2));
        assert_eq!((t.mu(60), t.omega(60), t.lpf(60)), (0, 3, 2));
        assert_eq!((t.mu(35), t.omega(35), t.lpf(35)), (1, 2, 5));
    }

    #[test]
    fn matches_trial_division_up_to_1e5() {
        let base = primes_up_to(400.0);
        let t = build_segment(1, 100_001, &base).unwrap();
        for n in 1..=100_000u64 {
            assert_eq!((t.mu(n), t.omega(n), t.lpf(n)), naive(n), "n = {n}");
        }
    }

    #[test]
    fn small_prime_lists() {
        assert!(primes_up_to(1.9).is_empty());
        assert_eq!(primes_up_to(10.0).primes(), &[2, 3, 5, 7]);
        assert_eq!(primes_up_to(11.0).primes(), &[2, 3, 5, 7, 11]);
        assert_eq!(primes_up_to(1e6).len(), 78_498);
    }

    #[test]
    fn insufficient_base_names_bound() {
        let base = primes_up_to(10.0);
        let err = build_segment(1, 1000, &base).unwrap_err();
        match err {
            SieveError::InsufficientBase { need, .. } => assert_eq!(need, 31),
            e => panic!("unexpected {e}"),
        }
        assert!(err_text(&build_segment(1, 1000, &base)).contains("31"));
    }

    fn err_text(r: &Result<FactorTable, SieveError>) -> String {
        r.as_ref().unwrap_err().to_string()
    }

    #[test]
    fn kth_factors() {
        assert_eq!(kth_prime_factor(60, 2, Direction::Largest), Some(3));
        assert_eq!(kth_prime_factor(60, 2, Direction::Smallest), Some(3));
        assert_eq!(kth_prime_factor(60, 1, Direction::Largest), Some(5));
        assert_eq!(kth_prime_factor(7, 2, Direction::Largest), None);
        assert_eq!(kth_prime_factor(1, 1, Direction::Smallest), Some(INFINITY_MARK));
        assert_eq!(kth_prime_factor(1, 2, Direction::Smallest), None);
    }

    #[test]
    fn isqrt_edges() {
        for n in [0u64, 1, 2, 3, 4, 15, 16, 17, 999_999_999_999, u64::MAX] {
            let r = isqrt(n);
            assert!(r.checked_mul(r).unwrap() <= n);
            assert!((r + 1).checked_mul(r + 1).map_or(true, |s| s > n));
        }
    }
}
