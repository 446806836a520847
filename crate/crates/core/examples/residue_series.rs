//! Σ μ(n) binom(ω(n)−1, k−1)/n over n whose least prime factor is 1 mod 4.

use mobius_sift::exact_sums::{residue_series_limit, ResidueFilter, SiftedSums};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let xs = [10_000u64, 100_000, 1_000_000, 10_000_000];
    let sums = SiftedSums::new(10_000_000);
    let filter = ResidueFilter::new(4, 1)?;
    for k in 1..=2 {
        let limit = residue_series_limit(4, k);
        for (x, s) in xs.iter().zip(sums.residue_grid(filter, k, &xs)?) {
            println!("k={k} x={x:>9}: {s:+.6}  (limit {limit:+}, distance {:.6})", (s - limit).abs());
        }
    }
    Ok(())
}
