//! Exact integer combinatorics: Stirling numbers of both kinds, Fubini
//! numbers, the `T_{j,k} = (k-1)! S(j+1, k)` coefficients, complete
//! exponential Bell polynomials and the binomial convention used by the
//! sifted sums.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Largest index held by [`StirlingTables::shared`].
pub const MAX_N: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CombError {
    #[error("{what}({n}, {k}) out of range (need {rule})")]
    OutOfRange {
        what: &'static str,
        n: usize,
        k: usize,
        rule: &'static str,
    },
}

/// Exact tables of `S(n, k)` (second kind) and unsigned `c(n, k)`
/// (first kind) for `0 <= k <= n <= max_n`.
#[derive(Debug, Clone)]
pub struct StirlingTables {
    max_n: usize,
    s2: Vec<Vec<BigUint>>,
    c1: Vec<Vec<BigUint>>,
}

impl StirlingTables {
    pub fn new(max_n: usize) -> Self {
        let mut s2 = vec![vec![BigUint::zero(); max_n + 1]; max_n + 1];
        let mut c1 = s2.clone();
        s2[0][0] = BigUint::one();
        c1[0][0] = BigUint::one();
        for n in 1..=max_n {
            for k in 1..=n {
                s2[n][k] = &s2[n - 1][k - 1] + &s2[n - 1][k] * BigUint::from(k);
                c1[n][k] = &c1[n - 1][k - 1] + &c1[n - 1][k] * BigUint::from(n - 1);
            }
        }
        Self { max_n, s2, c1 }
    }

    /// Process-wide table up to [`MAX_N`].
    pub fn shared() -> &'static StirlingTables {
        static TABLES: OnceLock<StirlingTables> = OnceLock::new();
        TABLES.get_or_init(|| StirlingTables::new(MAX_N))
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    fn check(&self, what: &'static str, n: usize, k: usize) -> Result<(), CombError> {
        if k > n || n > self.max_n {
            return Err(CombError::OutOfRange {
                what,
                n,
                k,
                rule: "0 <= k <= n <= 64",
            });
        }
        Ok(())
    }

    pub fn stirling2(&self, n: usize, k: usize) -> Result<&BigUint, CombError> {
        self.check("stirling2", n, k)?;
        Ok(&self.s2[n][k])
    }

    pub fn stirling1_unsigned(&self, n: usize, k: usize) -> Result<&BigUint, CombError> {
        self.check("stirling1_unsigned", n, k)?;
        Ok(&self.c1[n][k])
    }
}

/// Partitions of an `n`-set into `k` nonempty blocks.
pub fn stirling2(n: usize, k: usize) -> Result<BigUint, CombError> {
    StirlingTables::shared().stirling2(n, k).cloned()
}

/// Permutations of an `n`-set with exactly `k` cycles.
pub fn stirling1_unsigned(n: usize, k: usize) -> Result<BigUint, CombError> {
    StirlingTables::shared().stirling1_unsigned(n, k).cloned()
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `T_{j,k} = (k-1)! S(j+1, k)` for `1 <= k <= j+1`.
///
/// These are the coefficients in
/// `D_s^j [-log p / (p^s - 1)] = (-log p)^{j+1} sum_k T_{j,k} (p^s - 1)^{-k}`.
pub fn t_coeff(j: usize, k: usize) -> Result<BigUint, CombError> {
    if k < 1 || k > j + 1 || j + 1 > MAX_N {
        return Err(CombError::OutOfRange {
            what: "t_coeff",
            n: j,
            k,
            rule: "1 <= k <= j+1 <= 64",
        });
    }
    Ok(factorial(k - 1) * stirling2(j + 1, k)?)
}

/// Ordered set partitions of an `n`-set: `sum_k k! S(n, k)`.
pub fn fubini(n: usize) -> Result<BigUint, CombError> {
    if n > MAX_N {
        return Err(CombError::OutOfRange {
            what: "fubini",
            n,
            k: 0,
            rule: "n <= 64",
        });
    }
    let t = StirlingTables::shared();
    Ok((0..=n)
        .map(|k| factorial(k) * &t.s2[n][k])
        .fold(BigUint::zero(), |a, b| a + b))
}

/// Complete exponential Bell polynomial `Y_j(x_1, ..., x_j)`, using the
/// recurrence `Y_{n+1} = sum_{i=0}^{n} C(n, i) Y_{n-i} x_{i+1}`.
///
/// Only the first `j` entries of `args` are read.
pub fn bell_complete(j: usize, args: &[f64]) -> f64 {
    assert!(args.len() >= j, "bell_complete({j}) needs {j} arguments");
    let mut y = vec![1.0f64; j + 1];
    for n in 0..j {
        let mut acc = 0.0;
        let mut c = 1.0;
        for i in 0..=n {
            acc += c * y[n - i] * args[i];
            c = c * (n - i) as f64 / (i + 1) as f64;
        }
        y[n + 1] = acc;
    }
    y[j]
}

/// `binom(a, b)` with `a >= -1`: zero when `0 <= a < b`, `binom(-1, 0) = 1`
/// and `binom(-1, b) = 0` for `b >= 1`. This is the weight
/// `binom(omega(n) - 1, k - 1)`, so `n = 1` counts only when `k = 1`.
pub fn binom_conv(a: i64, b: u64) -> u64 {
    assert!(a >= -1, "binom_conv only defined for a >= -1");
    if a == -1 {
        return u64::from(b == 0);
    }
    let a = a as u64;
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut r: u64 = 1;
    for i in 0..b {
        r = r * (a - i) / (i + 1);
    }
    r
}

/// Coefficients of `prod_{i=1}^{m} (t + i)` in ascending powers of `t`.
pub fn rising_product_coeffs(m: usize) -> Vec<BigUint> {
    let mut c = vec![BigUint::one()];
    for i in 1..=m {
        let mut next = vec![BigUint::zero(); c.len() + 1];
        for (d, a) in c.iter().enumerate() {
            next[d] += a * BigUint::from(i);
            next[d + 1] += a;
        }
        c = next;
    }
    c
}

pub fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}
