//! Γ_{m,N}, the m-th derivative of 1/Γ(−z) at z = N+1, by three methods.

use mobius_sift::constants::{gamma_mn_closed, gamma_mn_contour, gamma_mn_oracle, stieltjes_const};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(" m  N  closed form            finite difference      contour X=40");
    for m in 0..=4 {
        for n in 0..=3 {
            println!(
                "{m:>2} {n:>2}  {:<+22.15e} {:<+22.15e} {:+.15e}",
                gamma_mn_closed(m, n)?,
                gamma_mn_oracle(m, n)?,
                gamma_mn_contour(m, n, 40.0)?
            );
        }
    }
    for n in 0..4 {
        println!("gamma_{n} = {:+.15}", stieltjes_const(n)?);
    }
    Ok(())
}
