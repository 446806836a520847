//! Mertens-type prime sums and their fitted growth in log y.

use mobius_sift::primesums::{
    asymptotic_fit, log_grid, mertens_product_defect, mertens_series, mertens_sum, FitBasis, MertensKind,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ys = log_grid(1e3, 1e7, 17);
    for n in 1..=3 {
        let vals = mertens_series(MertensKind::M, n, &ys)?;
        let samples: Vec<(f64, f64)> = ys.iter().copied().zip(vals).collect();
        let fit = asymptotic_fit(&samples, FitBasis::PolyLogY { degree: n })?;
        println!("M_{n}: leading coefficient {:.5} (1/N = {:.5})", fit.leading(), 1.0 / n as f64);
    }
    let y = 1e8;
    println!("M_1(1e8) - log 1e8 = {:.6}", mertens_sum(MertensKind::M, 1, y)? - y.ln());
    for y in [1e3, 1e5, 1e7] {
        println!("e^gamma log y prod(1-1/p) - 1 at y={y:e}: {:+.3e}", mertens_product_defect(y));
    }
    Ok(())
}
