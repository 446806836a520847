//! D_s^n D_z^i g(s, y, z) at s = 1, z = −1, with certified radii, against
//! finite differences of the truncated Euler product.

use mobius_sift::numeric::extrapolated_derivative;
use mobius_sift::primesums::{default_tail_cut, g_deriv, mixed_deriv, EulerProduct, MixedDerivTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("g(1, 10, -1) = {}", g_deriv(0, 10.0)?);
    for y in [10.0, 100.0, 1000.0] {
        let e = EulerProduct::new(y, 1e7)?;
        let fd = extrapolated_derivative(|h| e.value(-1.0 + h), 1, 0.2, 1.6, 10);
        let g = mixed_deriv(0, 1, y, default_tail_cut(y))?;
        println!("y={y:>6}: recursion {:+.9} ± {:.1e}, Euler product {:+.9}", g.value, g.radius, fd.value);
    }
    let t = MixedDerivTable::compute(3, 2, 50.0, default_tail_cut(50.0))?;
    for n in 0..=3 {
        let row: Vec<String> = (0..=2).map(|i| format!("{:+.6}", t.get(n, i).value)).collect();
        println!("D_s^{n} G_i(1, 50, -1), i = 0..2: {}", row.join("  "));
    }
    Ok(())
}
