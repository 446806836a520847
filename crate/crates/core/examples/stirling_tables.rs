//! Stirling numbers, the T_{j,k} coefficients and Fubini numbers.

use mobius_sift::combinatorics::{factorial, fubini, stirling1_unsigned, stirling2, t_coeff, to_f64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 0..=6 {
        let s2: Vec<String> = (0..=n).map(|k| stirling2(n, k).map(|v| v.to_string())).collect::<Result<_, _>>()?;
        let s1: Vec<String> = (0..=n).map(|k| stirling1_unsigned(n, k).map(|v| v.to_string())).collect::<Result<_, _>>()?;
        println!("n={n}: S2 [{}]  c [{}]", s2.join(" "), s1.join(" "));
    }
    for j in 0..=4 {
        let t: Vec<String> = (1..=j + 1).map(|k| t_coeff(j, k).map(|v| v.to_string())).collect::<Result<_, _>>()?;
        println!("T_{{{j},k}}: {}", t.join(" "));
    }
    for j in [4usize, 8, 12] {
        let f = to_f64(&fubini(j + 1)?);
        let bound = to_f64(&factorial(j + 1)) / std::f64::consts::LN_2.powi(j as i32 + 2);
        println!("F_{} = {f:.0} < {bound:.1}", j + 1);
    }
    Ok(())
}
