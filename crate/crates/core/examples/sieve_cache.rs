//! Segmented sieve with an on-disk cache; a second pass reads the files.

use std::time::Instant;

use mobius_sift::sieve::{Sieve, SieveCache};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("mobius-sift-example-cache");
    let sieve = Sieve::new(5_000_001).with_cache(Some(SieveCache::new(&dir)));
    let count = |t: &mobius_sift::sieve::FactorTable| t.mu_slice().iter().filter(|&&m| m != 0).count();
    for pass in 1..=2 {
        let t = Instant::now();
        let squarefree: usize = sieve.map_segments(1, 5_000_001, count)?.iter().sum();
        println!("pass {pass}: {squarefree} squarefree n <= 5e6 in {:.2?}", t.elapsed());
    }
    println!("cache files in {}", dir.display());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
