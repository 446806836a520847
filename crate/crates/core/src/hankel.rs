//! Quadrature of the truncated Hankel contour integral
//!
//! ```text
//! (1/2πi) ∫ (log w)^m w^{N+1} e^w dw
//! ```
//!
//! The contour runs along `Im w = -1` from `Re w = -X` to `-i`, around the
//! right half of the unit circle to `i`, and back along `Im w = +1` to
//! `-X + i`. As `X -> ∞` the value tends to Γ_{m,N}.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::constants::{gamma_mn_closed, ConstError};
use crate::numeric::KahanSum;

/// Panel width along arms (in `Re w`) and along the arc (in angle).
pub const PANEL_WIDTH: f64 = 0.5;
const MAX_NODES_PER_UNIT: usize = 256;
const REFINE_TOL: f64 = 1e-13;

#[derive(Debug, Error, PartialEq)]
pub enum HankelError {
    #[error("arm cutoff must be positive, got {0}")]
    BadCutoff(f64),
    #[error("refinement did not converge: last iterates {prev} and {last}")]
    NoConvergence { prev: f64, last: f64 },
    #[error("reference value unavailable: {0}")]
    Reference(#[from] ConstError),
}

/// Geometry and quadrature density of the truncated contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HankelContourSpec {
    /// Arm length: the arms reach `Re w = -cutoff`.
    pub cutoff: f64,
    pub arm_height: f64,
    pub arc_radius: f64,
    /// Starting Gauss–Legendre nodes per unit length; doubled until two
    /// successive densities agree.
    pub nodes_per_unit: usize,
}

impl HankelContourSpec {
    pub fn new(cutoff: f64) -> Self {
        Self {
            cutoff,
            arm_height: 1.0,
            arc_radius: 1.0,
            nodes_per_unit: 16,
        }
    }
}

/// Branch of `log w` used on the contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBranch {
    /// Principal branch, cut along the negative real axis.
    Principal,
    /// `ln |w|` everywhere. Wrong on purpose: it drops the monodromy.
    RealModulus,
}

fn integrand(w: Complex64, m: usize, n: usize, branch: LogBranch) -> Complex64 {
    let log = match branch {
        LogBranch::Principal => w.ln(),
        LogBranch::RealModulus => Complex64::new(w.norm().ln(), 0.0),
    };
    log.powi(m as i32) * w.powi(n as i32 + 1) * w.exp()
}

struct Rule {
    nodes: Vec<(f64, f64)>,
}

impl Rule {
    fn new(degree: usize) -> Self {
        let gl = GaussLegendre::new(degree.max(2)).expect("degree >= 2");
        Self {
            nodes: gl.iter().map(|&(x, w)| (x, w)).collect(),
        }
    }

    /// ∫_a^b f over panels of width at most PANEL_WIDTH.
    fn integrate<F: Fn(f64) -> Complex64>(&self, a: f64, b: f64, f: F) -> Complex64 {
        let panels = ((b - a).abs() / PANEL_WIDTH).ceil().max(1.0) as usize;
        let h = (b - a) / panels as f64;
        let (mut re, mut im) = (KahanSum::new(), KahanSum::new());
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            for &(x, w) in &self.nodes {
                let v = f(mid + 0.5 * h * x) * (0.5 * h * w);
                re.add(v.re);
                im.add(v.im);
            }
        }
        Complex64::new(re.value(), im.value())
    }
}

/// Raw contour pieces, each as ∫ h(w) dw (no 1/2πi factor).
struct Pieces {
    lower_arm: Complex64,
    lower_arc: Complex64,
    upper_arc: Complex64,
    upper_arm: Complex64,
}

fn pieces(m: usize, n: usize, spec: &HankelContourSpec, branch: LogBranch, degree: usize) -> Pieces {
    let rule = Rule::new(degree);
    let h = spec.arm_height;
    let r = spec.arc_radius;
    let x = spec.cutoff;
    let f = |w: Complex64| integrand(w, m, n, branch);
    // arms join the arc at Re w = sqrt(r^2 - h^2) (0 for the unit arc)
    let join = (r * r - h * h).max(0.0).sqrt();
    let theta0 = (h / r).min(1.0).asin();
    let lower_arm = rule.integrate(-x, join, |u| f(Complex64::new(u, -h)));
    let upper_arm = -rule.integrate(-x, join, |u| f(Complex64::new(u, h)));
    let arc = |t: f64| {
        let e = Complex64::from_polar(r, t);
        f(e) * Complex64::i() * e
    };
    let lower_arc = rule.integrate(-theta0, 0.0, arc);
    let upper_arc = rule.integrate(0.0, theta0, arc);
    Pieces {
        lower_arm,
        lower_arc,
        upper_arc,
        upper_arm,
    }
}

/// Full-contour value `(1/2πi) ∮` at one quadrature degree.
fn full_at(m: usize, n: usize, spec: &HankelContourSpec, branch: LogBranch, degree: usize) -> Complex64 {
    let p = pieces(m, n, spec, branch, degree);
    (p.lower_arm + p.lower_arc + p.upper_arc + p.upper_arm) / Complex64::new(0.0, 2.0 * PI)
}

/// Value from the upper half only: `2 Re[(1/2πi) ∫_upper]`.
fn upper_at(m: usize, n: usize, spec: &HankelContourSpec, degree: usize) -> f64 {
    let p = pieces(m, n, spec, LogBranch::Principal, degree);
    let u = (p.upper_arc + p.upper_arm) / Complex64::new(0.0, 2.0 * PI);
    2.0 * u.re
}

fn refine<F: Fn(usize) -> Complex64>(spec: &HankelContourSpec, eval: F) -> Result<Complex64, HankelError> {
    if !(spec.cutoff > 0.0) {
        return Err(HankelError::BadCutoff(spec.cutoff));
    }
    let mut per_unit = spec.nodes_per_unit.max(4);
    let degree = |p: usize| ((p as f64 * PANEL_WIDTH).ceil() as usize).max(2);
    let mut prev = eval(degree(per_unit));
    while per_unit < MAX_NODES_PER_UNIT {
        per_unit *= 2;
        let next = eval(degree(per_unit));
        if (next - prev).norm() <= REFINE_TOL * next.norm().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    let last = eval(degree(per_unit));
    Err(HankelError::NoConvergence {
        prev: prev.re,
        last: last.re,
    })
}

/// Complex full-contour value with the chosen log branch.
pub fn hankel_integral_complex(
    m: usize,
    n: usize,
    spec: &HankelContourSpec,
    branch: LogBranch,
) -> Result<Complex64, HankelError> {
    refine(spec, |d| full_at(m, n, spec, branch, d))
}

/// `(1/2πi) ∮ (log w)^m w^{N+1} e^w dw` over the truncated contour; the
/// imaginary part vanishes by conjugate symmetry and is dropped.
pub fn hankel_integral(m: usize, n: usize, spec: &HankelContourSpec) -> Result<f64, HankelError> {
    Ok(hankel_integral_complex(m, n, spec, LogBranch::Principal)?.re)
}

/// The same value computed from the upper half of the contour alone.
pub fn hankel_integral_upper_half(
    m: usize,
    n: usize,
    spec: &HankelContourSpec,
) -> Result<f64, HankelError> {
    Ok(refine(spec, |d| Complex64::new(upper_at(m, n, spec, d), 0.0))?.re)
}

/// Per-arm contributions `(1/2πi) ∫_arm` for the principal branch.
pub fn arm_contributions(m: usize, n: usize, spec: &HankelContourSpec) -> (Complex64, Complex64) {
    let p = pieces(m, n, spec, LogBranch::Principal, 32);
    let s = Complex64::new(0.0, 2.0 * PI);
    (p.lower_arm / s, p.upper_arm / s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub cutoff: f64,
    pub value: f64,
    pub abs_error: f64,
}

/// `|hankel_integral(X) - Γ_{m,N}|` for each cutoff, against the closed form.
pub fn truncation_decay_scan(m: usize, n: usize, cutoffs: &[f64]) -> Result<Vec<DecayRow>, HankelError> {
    let reference = gamma_mn_closed(m, n)?;
    cutoffs
        .iter()
        .map(|&x| {
            let value = hankel_integral(m, n, &HankelContourSpec::new(x))?;
            Ok(DecayRow {
                cutoff: x,
                value,
                abs_error: (value - reference).abs(),
            })
        })
        .collect()
}
