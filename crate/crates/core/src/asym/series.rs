//! Truncated double series in `u = s − 1` and `L = log(1/u)`.
//!
//! A [`BiSeries`] of shape `(I, J)` stores `c[i][j]` for `i <= I`,
//! `j <= J` and stands for `Σ c[i][j] u^i L^j` modulo `u^{I+1}` and
//! `L^{J+1}`. Both truncations are ideals, so sums and products are exact
//! in the quotient ring and associativity holds coefficientwise.
//!
//! `log`, `exp` and `recip` expand around the `u^0 L^0` term and need the
//! rest of the `u^0` row to vanish, so that the perturbation is nilpotent.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("u^0 L^{j} coefficient {coeff} is nonzero; expansion needs a pure constant at u^0")]
    LogAtOrderZero { j: usize, coeff: f64 },
    #[error("series logarithm needs a positive constant term, got {0}")]
    NonPositiveConstant(f64),
    #[error("reciprocal of a series with zero constant term")]
    ZeroConstant,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiSeries {
    i_max: usize,
    j_max: usize,
    /// row-major `c[i * (j_max + 1) + j]`
    coeff: Vec<f64>,
}

impl BiSeries {
    pub fn zeros(i_max: usize, j_max: usize) -> Self {
        Self {
            i_max,
            j_max,
            coeff: vec![0.0; (i_max + 1) * (j_max + 1)],
        }
    }

    pub fn constant(c: f64, i_max: usize, j_max: usize) -> Self {
        let mut s = Self::zeros(i_max, j_max);
        s.coeff[0] = c;
        s
    }

    /// The monomial `u`.
    pub fn u(i_max: usize, j_max: usize) -> Self {
        let mut s = Self::zeros(i_max, j_max);
        if i_max >= 1 {
            s.set(1, 0, 1.0);
        }
        s
    }

    /// The monomial `L = log(1/u)`.
    pub fn l(i_max: usize, j_max: usize) -> Self {
        let mut s = Self::zeros(i_max, j_max);
        if j_max >= 1 {
            s.set(0, 1, 1.0);
        }
        s
    }

    /// A pure u-series from `c[0], c[1], …`; entries past `i_max` are dropped.
    pub fn from_u_coeffs(c: &[f64], i_max: usize, j_max: usize) -> Self {
        let mut s = Self::zeros(i_max, j_max);
        for (i, &v) in c.iter().enumerate().take(i_max + 1) {
            s.set(i, 0, v);
        }
        s
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.i_max, self.j_max)
    }

    pub fn i_max(&self) -> usize {
        self.i_max
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    /// `c[i][j]`, zero outside the stored range.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i > self.i_max || j > self.j_max {
            0.0
        } else {
            self.coeff[i * (self.j_max + 1) + j]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(i <= self.i_max && j <= self.j_max, "({i},{j}) outside {:?}", self.shape());
        self.coeff[i * (self.j_max + 1) + j] = v;
    }

    /// Same coefficients in another shape, truncating or zero-padding.
    pub fn reshape(&self, i_max: usize, j_max: usize) -> Self {
        let mut s = Self::zeros(i_max, j_max);
        for i in 0..=i_max.min(self.i_max) {
            for j in 0..=j_max.min(self.j_max) {
                s.set(i, j, self.coeff(i, j));
            }
        }
        s
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            coeff: self.coeff.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    /// Entrywise absolute values.
    pub fn abs(&self) -> Self {
        Self {
            coeff: self.coeff.iter().map(|v| v.abs()).collect(),
            ..self.clone()
        }
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.check_shape(o);
        self.coeff
            .iter()
            .zip(&o.coeff)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(1.0, self.i_max, self.j_max);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn split_constant(&self) -> Result<(f64, Self), SeriesError> {
        for j in 1..=self.j_max {
            let c = self.coeff(0, j);
            if c != 0.0 {
                return Err(SeriesError::LogAtOrderZero { j, coeff: c });
            }
        }
        let mut rest = self.clone();
        rest.coeff[0] = 0.0;
        Ok((self.coeff[0], rest))
    }

    /// `Σ_{m=0}^{I} a_m N^m` for the nilpotent part `N` (`N^{I+1} = 0`).
    fn nilpotent_sum(n: &Self, a: impl Fn(usize) -> f64) -> Self {
        let mut acc = Self::zeros(n.i_max, n.j_max);
        let mut p = Self::constant(1.0, n.i_max, n.j_max);
        for m in 0..=n.i_max {
            acc = &acc + &p.scale(a(m));
            p = &p * n;
        }
        acc
    }

    pub fn recip(&self) -> Result<Self, SeriesError> {
        let (c0, n) = self.split_constant()?;
        if c0 == 0.0 {
            return Err(SeriesError::ZeroConstant);
        }
        let n = n.scale(1.0 / c0);
        Ok(Self::nilpotent_sum(&n, |m| if m % 2 == 0 { 1.0 } else { -1.0 }).scale(1.0 / c0))
    }

    pub fn log(&self) -> Result<Self, SeriesError> {
        let (c0, n) = self.split_constant()?;
        if !(c0 > 0.0) {
            return Err(SeriesError::NonPositiveConstant(c0));
        }
        let n = n.scale(1.0 / c0);
        let mut s = Self::nilpotent_sum(&n, |m| match m {
            0 => 0.0,
            _ if m % 2 == 1 => 1.0 / m as f64,
            _ => -1.0 / m as f64,
        });
        s.coeff[0] += c0.ln();
        Ok(s)
    }

    pub fn exp(&self) -> Result<Self, SeriesError> {
        let (c0, n) = self.split_constant()?;
        let mut fact = 1.0;
        let inv_fact: Vec<f64> = (0..=self.i_max)
            .map(|m| {
                if m > 0 {
                    fact *= m as f64;
                }
                1.0 / fact
            })
            .collect();
        Ok(Self::nilpotent_sum(&n, |m| inv_fact[m]).scale(c0.exp()))
    }

    /// Value at `u > 0` with `L = ln(1/u)`.
    pub fn eval(&self, u: f64) -> f64 {
        let l = (1.0 / u).ln();
        let mut acc = 0.0;
        for i in (0..=self.i_max).rev() {
            let mut row = 0.0;
            for j in (0..=self.j_max).rev() {
                row = row * l + self.coeff(i, j);
            }
            acc = acc * u + row;
        }
        acc
    }

    fn check_shape(&self, o: &Self) {
        assert_eq!(self.shape(), o.shape(), "series shapes differ");
    }
}

impl Add for &BiSeries {
    type Output = BiSeries;
    fn add(self, o: &BiSeries) -> BiSeries {
        self.check_shape(o);
        BiSeries {
            coeff: self.coeff.iter().zip(&o.coeff).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }
}

impl Sub for &BiSeries {
    type Output = BiSeries;
    fn sub(self, o: &BiSeries) -> BiSeries {
        self + &(-o)
    }
}

impl Neg for &BiSeries {
    type Output = BiSeries;
    fn neg(self) -> BiSeries {
        self.scale(-1.0)
    }
}

/// Truncated product; terms past `u^I` or `L^J` are discarded.
///
/// # Panics
/// If the shapes differ.
impl Mul for &BiSeries {
    type Output = BiSeries;
    fn mul(self, o: &BiSeries) -> BiSeries {
        self.check_shape(o);
        let mut out = BiSeries::zeros(self.i_max, self.j_max);
        for i1 in 0..=self.i_max {
            for j1 in 0..=self.j_max {
                let a = self.coeff(i1, j1);
                if a == 0.0 {
                    continue;
                }
                for i2 in 0..=self.i_max - i1 {
                    for j2 in 0..=self.j_max - j1 {
                        let k = (i1 + i2) * (self.j_max + 1) + j1 + j2;
                        out.coeff[k] += a * o.coeff(i2, j2);
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_reciprocal() {
        let one_minus_u = &BiSeries::constant(1.0, 5, 0) - &BiSeries::u(5, 0);
        let r = one_minus_u.recip().unwrap();
        for i in 0..=5 {
            assert_eq!(r.coeff(i, 0), 1.0);
        }
    }

    #[test]
    fn log_exp_roundtrip_with_l_terms() {
        let mut s = BiSeries::constant(2.0, 4, 2);
        s.set(1, 0, 0.3);
        s.set(1, 1, -0.7);
        s.set(2, 2, 0.25);
        s.set(3, 1, 1.5);
        let back = s.log().unwrap().exp().unwrap();
        assert!(back.max_abs_diff(&s) < 1e-13);
    }

    #[test]
    fn expansion_rejects_l_at_order_zero() {
        let s = &BiSeries::constant(1.0, 3, 1) + &BiSeries::l(3, 1);
        assert_eq!(s.log(), Err(SeriesError::LogAtOrderZero { j: 1, coeff: 1.0 }));
        assert_eq!(BiSeries::u(3, 0).recip(), Err(SeriesError::ZeroConstant));
    }

    #[test]
    fn eval_matches_closed_form() {
        // (1 + u L)^2 = 1 + 2uL + u²L²
        let s = (&BiSeries::constant(1.0, 4, 2) + &(&BiSeries::u(4, 2) * &BiSeries::l(4, 2))).pow(2);
        let u: f64 = 0.05;
        let l = (1.0 / u).ln();
        assert!((s.eval(u) - (1.0 + u * l).powi(2)).abs() < 1e-14);
    }

    #[test]
    fn product_drops_high_l_degree() {
        let l = BiSeries::l(2, 1);
        assert_eq!((&l * &l).coeff(0, 1), 0.0);
        assert_eq!((&l * &l), BiSeries::zeros(2, 1));
    }
}
