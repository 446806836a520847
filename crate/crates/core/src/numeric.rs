//! Small floating-point helpers shared across modules: compensated
//! summation and extrapolated finite differences.

use std::f64::consts::PI;
use std::iter::Sum;

use num_complex::Complex64;

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Sum<f64> for KahanSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator of floats.
pub fn ksum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().sum::<KahanSum>().value()
}

/// Binomial coefficient as f64 for small arguments.
pub fn binom_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

pub fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Central difference of order `m` with step `h`, symmetric about 0:
/// sum_j (-1)^j C(m,j) f((m/2 - j) h) / h^m.
fn central_difference<F: Fn(f64) -> f64>(f: &F, m: usize, h: f64) -> f64 {
    let half = m as f64 / 2.0;
    let mut acc = KahanSum::new();
    for j in 0..=m {
        let w = binom_f64(m, j) * if j % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(w * f((half - j as f64) * h));
    }
    acc.value() / h.powi(m as i32)
}

/// Outcome of an extrapolated derivative.
#[derive(Debug, Clone, Copy)]
pub struct Extrapolated {
    pub value: f64,
    /// Difference between the two best tableau entries; an error proxy.
    pub residual: f64,
}

/// m-th derivative at 0 of `f` by Ridders-style polynomial extrapolation
/// in h^2 of central differences on the geometric schedule
/// h0, h0/shrink, h0/shrink^2, ...; the tableau entry with the smallest
/// change against its neighbours wins.
///
/// `f` is evaluated at offsets from the expansion point, so callers can
/// keep the abscissae exact.
pub fn extrapolated_derivative<F: Fn(f64) -> f64>(
    f: F,
    m: usize,
    h0: f64,
    shrink: f64,
    levels: usize,
) -> Extrapolated {
    if m == 0 {
        return Extrapolated {
            value: f(0.0),
            residual: 0.0,
        };
    }
    let fac = shrink * shrink;
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(levels);
    let mut best = f64::NAN;
    let mut err = f64::INFINITY;
    let mut h = h0;
    for i in 0..levels {
        let mut row = vec![central_difference(&f, m, h)];
        let mut pow = fac;
        for j in 1..=i {
            let prev = table[i - 1][j - 1];
            let cur = row[j - 1];
            let next = (cur * pow - prev) / (pow - 1.0);
            let e = (next - cur).abs().max((next - prev).abs());
            if e <= err {
                err = e;
                best = next;
            }
            row.push(next);
            pow *= fac;
        }
        if i == 0 {
            best = row[0];
        }
        table.push(row);
        h /= shrink;
    }
    Extrapolated {
        value: best,
        residual: err,
    }
}

/// m-th derivative at 0 of a function analytic on the disc `|t| <= r`,
/// from `nodes` equally spaced samples on the circle `|t| = r`:
/// `f^(m)(0) ≈ m!/(K r^m) sum_k f(r ω^k) ω^{-km}`, `ω = e^{2πi/K}`.
///
/// This is the central difference taken over the K-th roots of unity
/// instead of along the real axis, so its rounding error stays near
/// `eps · max|f| · m!/r^m` however large `m` gets.
pub fn circle_derivative<F: Fn(Complex64) -> Complex64>(f: F, m: usize, r: f64, nodes: usize) -> Complex64 {
    let (mut re, mut im) = (KahanSum::new(), KahanSum::new());
    for k in 0..nodes {
        let theta = 2.0 * PI * k as f64 / nodes as f64;
        let v = f(Complex64::from_polar(r, theta)) * Complex64::from_polar(1.0, -(m as f64) * theta);
        re.add(v.re);
        im.add(v.im);
    }
    let scale = factorial_f64(m) / (nodes as f64 * r.powi(m as i32));
    Complex64::new(re.value(), im.value()) * scale
}

/// Γ(z) for complex `z` with `Re z >= 0.5`, Lanczos approximation
/// (g = 7, nine coefficients); relative error near 1e-15.
pub fn complex_gamma(z: Complex64) -> Complex64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    assert!(z.re >= 0.5, "complex_gamma needs Re z >= 0.5");
    let z = z - 1.0;
    let mut x = Complex64::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(ksum(xs), 2.0);
    }

    #[test]
    fn circle_derivatives_of_exp() {
        for m in 0..=8 {
            let d = circle_derivative(|t| (t + 0.3).exp(), m, 1.0, 48);
            let tol = 1e-14 * factorial_f64(m).max(1.0);
            assert!((d.re - 0.3f64.exp()).abs() < tol, "m={m}: {d}");
            assert!(d.im.abs() < tol);
        }
    }

    #[test]
    fn complex_gamma_on_real_axis() {
        for x in [0.5, 1.0, 1.5, 2.0, 3.7, 7.2, 12.0] {
            let c = complex_gamma(Complex64::new(x, 0.0));
            let r = statrs::function::gamma::gamma(x);
            assert!((c.re - r).abs() < 1e-13 * r, "x={x}: {c} vs {r}");
        }
        // Γ(1+i) Γ(1-i) = π / sinh π
        let a = complex_gamma(Complex64::new(1.0, 1.0));
        let b = complex_gamma(Complex64::new(1.0, -1.0));
        assert!(((a * b).re - PI / PI.sinh()).abs() < 1e-14);
    }

    #[test]
    fn extrapolated_derivatives_of_exp() {
        for m in 1..=5 {
            let d = extrapolated_derivative(|t: f64| (0.3 + t).exp(), m, 0.4, 1.4, 10);
            assert!((d.value - 0.3f64.exp()).abs() < 1e-9, "m={m}: {d:?}");
        }
    }
}
