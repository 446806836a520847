//! Expansion coefficients φ[i][j](y) and the main term against exact sums.

use mobius_sift::asym::{compare, phi_table, Window};
use mobius_sift::exact_sums::SiftedSums;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let phi = phi_table(10.0, 2, 3)?;
    for i in 1..=3 {
        println!("phi[{i}] at y=10, k=2: {:+.6} {:+.6}", phi.get(i, 0), phi.get(i, 1));
    }
    let xs = [100_000u64, 1_000_000, 10_000_000];
    let sums = SiftedSums::new(10_000_000);
    for n in 1..=3 {
        for r in compare(&sums, &xs, 5.0, 2, n, &Window::default())? {
            println!(
                "N={n} x={:>8}: exact {:>7}, main term {:>10.1}, normalized residual {:.2}",
                r.x, r.exact, r.main_term, r.normalized_residual
            );
        }
    }
    Ok(())
}
