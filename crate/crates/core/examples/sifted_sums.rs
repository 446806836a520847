//! Exact M_{k,ω}(x, y) on a grid of x, and the vanishing past y = x^(1/k).

use mobius_sift::exact_sums::{upper_bound_ratio, SiftedSums};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let xs = [10_000u64, 100_000, 1_000_000];
    let sums = SiftedSums::new(1_000_000);
    for k in 1..=3 {
        let row = sums.mkw_grid(&xs, 5.0, k, None)?;
        println!("k={k}, y=5: {row:?}");
    }
    // once y passes x^(1/k) every surviving n has fewer than k prime factors
    for k in 2..=4u32 {
        let x = 1_000_000u64;
        let y = 1.01 * (x as f64).powf(1.0 / f64::from(k));
        println!("k={k}, y={y:.1}: M = {}", sums.mkw_grid(&[x], y, k, None)?[0]);
    }
    println!("|M| log x / (x (log log x)^(k-1)) at x=1e6, y=10, k=2: {:.4}", upper_bound_ratio(1_000_000, 10.0, 2)?);
    Ok(())
}
