//! Duality between smallest and largest prime factors, checked two ways.

use mobius_sift::exact_sums::{duality_sides, duality_sweep, PrimeFn};
use mobius_sift::sieve::{distinct_prime_factors, INFINITY_MARK};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 2 * 3 * 5 * 7 * 11;
    let f = |p: u64| if p == INFINITY_MARK { 0 } else { p as i64 };
    for k in 1..=3 {
        let s = duality_sides(&distinct_prime_factors(n), k, f);
        println!("n={n} k={k}: {s:?}");
    }
    for f in PrimeFn::ALL {
        let r = duality_sweep(100_000, 2, f)?;
        println!("{f:?}: {} values of n checked, passed = {}", r.checked, r.passed());
    }
    Ok(())
}
