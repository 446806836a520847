use mobius_sift::sieve::*;
use proptest::prelude::*;

/// (μ, ω, least prime factor) by trial division.
fn naive(n: u64) -> (i8, u8, u64) {
    if n == 1 {
        return (1, 0, INFINITY_MARK);
    }
    let ps = distinct_prime_factors(n);
    let mu = if ps.iter().product::<u64>() != n {
        0
    } else if ps.len() % 2 == 0 {
        1
    } else {
        -1
    };
    (mu, ps.len() as u8, ps[0])
}

#[test]
fn cached_tables_are_bit_identical_to_fresh_ones() {
    let dir = tempfile::tempdir().unwrap();
    let fresh = Sieve::new(200_001).with_segment_len(30_000);
    let cached = Sieve::new(200_001)
        .with_segment_len(30_000)
        .with_cache(Some(SieveCache::new(dir.path())));
    let a = fresh.map_segments(1, 200_001, Clone::clone).unwrap();
    let first = cached.map_segments(1, 200_001, Clone::clone).unwrap();
    let second = cached.map_segments(1, 200_001, Clone::clone).unwrap();
    assert_eq!(a, first);
    assert_eq!(a, second);
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 7);
    let bytes = std::fs::read(SieveCache::new(dir.path()).path_for(1, 30_001)).unwrap();
    assert_eq!(&bytes[..8], CACHE_MAGIC);
}

#[test]
fn truncated_cache_file_names_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cache = SieveCache::new(dir.path());
    let sieve = Sieve::new(10_001).with_cache(Some(cache.clone()));
    sieve.table(1, 10_001).unwrap();
    let path = cache.path_for(1, 10_001);
    let bytes = std::fs::read(&path).unwrap();
    std::fs::write(&path, &bytes[..bytes.len() - 5]).unwrap();
    let err = sieve.table(1, 10_001).unwrap_err().to_string();
    assert!(err.contains(&path.display().to_string()), "{err}");
}

#[test]
fn ceiling_is_enforced() {
    let s = Sieve::new(1_000_001).with_ceiling(1000);
    assert!(matches!(s.table(1, 5000), Err(SieveError::AboveCeiling { .. })));
    assert_eq!(Sieve::new(10).with_ceiling(u64::MAX).ceiling(), SIEVE_HARD_MAX);
}

#[test]
fn prime_counts() {
    assert_eq!(primes_up_to(1e6).len(), 78_498);
    assert_eq!(primes_up_to(1e7).len(), 664_579);
    let sum = sum_over_primes(0.0, 1e5, 1, |_, out| out[0] = 1.0);
    assert_eq!(sum[0], 9592.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn segments_match_trial_division(lo in 1u64..2_000_000, len in 1u64..3000) {
        let hi = lo + len;
        let t = Sieve::new(hi).table(lo, hi).unwrap();
        for (n, mu, omega, lpf) in t.iter() {
            prop_assert_eq!((mu, omega, lpf), naive(n), "n = {}", n);
        }
    }

    #[test]
    fn kth_factors_bracket_each_other(n in 2u64..10_000_000, k in 1usize..4) {
        let s = kth_prime_factor(n, k, Direction::Smallest);
        let l = kth_prime_factor(n, k, Direction::Largest);
        prop_assert_eq!(s.is_some(), l.is_some());
        let w = distinct_prime_factors(n).len();
        if let (Some(s), Some(l)) = (s, l) {
            // the k-th smallest is the (w−k+1)-th largest
            prop_assert_eq!(Some(s), kth_prime_factor(n, w - k + 1, Direction::Largest));
            prop_assert_eq!(Some(l), kth_prime_factor(n, w - k + 1, Direction::Smallest));
        }
    }
}
