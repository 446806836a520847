//! Error of the truncated Hankel integral as the contour grows.

use mobius_sift::hankel::{arm_contributions, truncation_decay_scan, HankelContourSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (m, n) in [(1, 1), (2, 3), (4, 5)] {
        println!("(m, N) = ({m}, {n})");
        for r in truncation_decay_scan(m, n, &[10.0, 20.0, 30.0, 40.0, 50.0])? {
            println!("  X={:>4}: value {:+.12e}, error {:.3e}", r.cutoff, r.value, r.abs_error);
        }
    }
    let (lower, upper) = arm_contributions(1, 1, &HankelContourSpec::new(30.0));
    println!("arms at X=30 for (1,1): lower {lower:.6}, upper {upper:.6}");
    Ok(())
}
