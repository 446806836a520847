//! Growth-order comparisons on log-forms.
//!
//! A function is represented by its logarithm as a finite sum of
//! monomials `(log x)^a (log log x)^b`. Monomials are ordered
//! lexicographically in `(a, b)`, which is their order of growth; those at
//! or below `(0, 0)` are bounded and dropped, so a form only records the
//! unbounded part of `log f`.
//!
//! * `f <_∀ g`: `f = o(g^ε)` for every `ε > 0`.
//! * `f <_∃ g`: `f = o(g^{1−ε})` for some `ε ∈ (0, 1)`.
//!
//! Both are decided from the leading monomials and coefficients alone.

pub mod parse;
pub mod properties;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

pub use parse::{parse_form, ParseError};

pub type Q = Rational64;

#[derive(Debug, Error, PartialEq)]
pub enum OrderError {
    #[error("not in the growth family: {0}")]
    OutOfClass(String),
    #[error("non-canonical growth class: {0}")]
    NonCanonical(String),
    #[error("both arguments are bounded; the order is undefined")]
    BothBounded,
    #[error("{0} is bounded; expected an unbounded function")]
    Bounded(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// `(log x)^a (log log x)^b`
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub a: Q,
    pub b: Q,
}

impl Monomial {
    pub fn new(a: Q, b: Q) -> Self {
        Self { a, b }
    }

    pub fn log_x() -> Self {
        Self::new(Q::one(), Q::zero())
    }

    pub fn log_log_x() -> Self {
        Self::new(Q::zero(), Q::one())
    }

    pub fn is_unbounded(&self) -> bool {
        *self > Self::new(Q::zero(), Q::zero())
    }

    pub fn eval(&self, t: f64) -> f64 {
        t.powf(q_f64(self.a)) * t.ln().powf(q_f64(self.b))
    }
}

fn q_f64(q: Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Unbounded part of `log f`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LogForm {
    terms: BTreeMap<Monomial, Q>,
}

impl LogForm {
    /// Bounded functions (constants and anything tending to a limit).
    pub fn bounded() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(terms: I) -> Self {
        let mut map: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, c) in terms {
            if m.is_unbounded() {
                *map.entry(m).or_insert_with(Q::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        Self { terms: map }
    }

    /// `x^r`
    pub fn power_of_x(r: Q) -> Self {
        Self::from_terms([(Monomial::log_x(), r)])
    }

    /// Terms in decreasing order of growth.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Q)> + '_ {
        self.terms.iter().rev().map(|(m, c)| (*m, *c))
    }

    pub fn coeff(&self, m: Monomial) -> Q {
        self.terms.get(&m).copied().unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Option<(Monomial, Q)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    /// `f → ∞`.
    pub fn is_unbounded(&self) -> bool {
        self.leading().is_some_and(|(_, c)| c.is_positive())
    }

    /// The form of `f·g`.
    pub fn mul(&self, o: &Self) -> Self {
        Self::from_terms(self.terms().chain(o.terms()))
    }

    /// The form of `f/g`.
    pub fn div(&self, o: &Self) -> Self {
        Self::from_terms(self.terms().chain(o.terms().map(|(m, c)| (m, -c))))
    }

    /// The form of `f^p`.
    pub fn pow(&self, p: Q) -> Self {
        Self::from_terms(self.terms().map(|(m, c)| (m, c * p)))
    }

    /// The form of `f + g` for positive `f`, `g`: the pointwise dominant
    /// log-form. Exact ties differ from either by a constant.
    pub fn add(&self, o: &Self) -> Self {
        match self.div(o).leading() {
            Some((_, c)) if c.is_negative() => o.clone(),
            _ => self.clone(),
        }
    }

    /// `log f` at `log x = t`, dropping bounded terms.
    pub fn eval(&self, t: f64) -> f64 {
        self.terms().map(|(m, c)| q_f64(c) * m.eval(t)).sum()
    }

    /// `f <_∀ g`.
    pub fn lt_forall(&self, g: &Self) -> Result<bool, OrderError> {
        let Some((mg, _)) = g.leading().filter(|(_, c)| c.is_positive()) else {
            return self.bounded_g();
        };
        Ok(match self.leading() {
            None => true,
            Some((mf, cf)) => mf < mg || cf.is_negative(),
        })
    }

    /// `f <_∃ g`.
    pub fn lt_exists(&self, g: &Self) -> Result<bool, OrderError> {
        let Some((mg, cg)) = g.leading().filter(|(_, c)| c.is_positive()) else {
            return self.bounded_g();
        };
        Ok(match self.leading() {
            None => true,
            Some((mf, cf)) => match mf.cmp(&mg) {
                Ordering::Less => true,
                Ordering::Greater => cf.is_negative(),
                Ordering::Equal => cf < cg,
            },
        })
    }

    fn bounded_g(&self) -> Result<bool, OrderError> {
        if self.is_unbounded() {
            Ok(false)
        } else {
            Err(OrderError::BothBounded)
        }
    }

    /// `f = o(x^ε)` for every `ε > 0`.
    pub fn is_subradical(&self) -> bool {
        self.lt_forall(&Self::power_of_x(Q::one())).expect("x is unbounded")
    }

    /// Form of `log f` as a function of `t = log x`: if the leading term of
    /// `log f` is `c (log x)^a (log log x)^b` with `c > 0`, then
    /// `log log f = a log t + b log log t + O(1)`.
    pub fn log_form(&self) -> Result<Self, OrderError> {
        match self.leading() {
            Some((m, c)) if c.is_positive() => Ok(Self::from_terms([
                (Monomial::log_x(), m.a),
                (Monomial::log_log_x(), m.b),
            ])),
            _ => Err(OrderError::Bounded(self.to_string())),
        }
    }
}

fn fmt_q(q: Q) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("({q})")
    }
}

impl fmt::Display for LogForm {
    /// Writes `exp(c*logx^a*llx^b + …)`, with `x^r` and `logx^d` pulled out.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut inner = Vec::new();
        for (m, c) in self.terms() {
            if m == Monomial::log_x() {
                parts.push(format!("x^{}", fmt_q(c)));
            } else if m == Monomial::log_log_x() {
                parts.push(format!("logx^{}", fmt_q(c)));
            } else {
                let mut t = fmt_q(c);
                if !m.a.is_zero() {
                    t.push_str(&format!("*logx^{}", fmt_q(m.a)));
                }
                if !m.b.is_zero() {
                    t.push_str(&format!("*llx^{}", fmt_q(m.b)));
                }
                inner.push(t);
            }
        }
        if !inner.is_empty() {
            parts.push(format!("exp({})", inner.join(" + ")));
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl FromStr for LogForm {
    type Err = OrderError;
    fn from_str(s: &str) -> Result<Self, OrderError> {
        parse_form(s)
    }
}

fn q_string<S: serde::Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}

/// Canonical class `log f = ρ log x + c (log x)^α (log log x)^β + δ log log x`
/// with the middle term strictly between `log log x` and `log x` in growth
/// (and distinct from both), or absent (`c = α = β = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GrowthClass {
    #[serde(serialize_with = "q_string")]
    pub rho: Q,
    #[serde(serialize_with = "q_string")]
    pub c: Q,
    #[serde(serialize_with = "q_string")]
    pub alpha: Q,
    #[serde(serialize_with = "q_string")]
    pub beta: Q,
    #[serde(serialize_with = "q_string")]
    pub delta: Q,
}

impl GrowthClass {
    pub fn new(rho: Q, c: Q, alpha: Q, beta: Q, delta: Q) -> Result<Self, OrderError> {
        let g = Self {
            rho,
            c,
            alpha,
            beta,
            delta,
        };
        g.check()?;
        Ok(g)
    }

    /// `x^ρ (log x)^δ`
    pub fn power(rho: Q, delta: Q) -> Self {
        Self {
            rho,
            c: Q::zero(),
            alpha: Q::zero(),
            beta: Q::zero(),
            delta,
        }
    }

    /// `exp(c (log x)^α (log log x)^β)`
    pub fn exp_term(c: Q, alpha: Q, beta: Q) -> Result<Self, OrderError> {
        Self::new(Q::zero(), c, alpha, beta, Q::zero())
    }

    pub fn check(&self) -> Result<(), OrderError> {
        let m = Monomial::new(self.alpha, self.beta);
        if self.c.is_zero() {
            if !self.alpha.is_zero() || !self.beta.is_zero() {
                return Err(OrderError::NonCanonical(format!(
                    "c = 0 but (α, β) = ({}, {})",
                    self.alpha, self.beta
                )));
            }
        } else if !m.is_unbounded() || m >= Monomial::log_x() || m == Monomial::log_log_x() {
            return Err(OrderError::NonCanonical(format!(
                "middle term (log x)^{} (log log x)^{} must lie strictly between log log x and log x",
                self.alpha, self.beta
            )));
        }
        Ok(())
    }

    pub fn to_form(&self) -> LogForm {
        LogForm::from_terms([
            (Monomial::log_x(), self.rho),
            (Monomial::new(self.alpha, self.beta), self.c),
            (Monomial::log_log_x(), self.delta),
        ])
    }

    pub fn is_unbounded(&self) -> bool {
        self.to_form().is_unbounded()
    }

    pub fn mul(&self, o: &Self) -> Result<Self, OrderError> {
        Self::try_from(&self.to_form().mul(&o.to_form()))
    }

    pub fn divide(&self, o: &Self) -> Result<Self, OrderError> {
        Self::try_from(&self.to_form().div(&o.to_form()))
    }

    pub fn pow(&self, p: Q) -> Result<Self, OrderError> {
        Self::try_from(&self.to_form().pow(p))
    }

    pub fn add(&self, o: &Self) -> Result<Self, OrderError> {
        Self::try_from(&self.to_form().add(&o.to_form()))
    }
}

impl TryFrom<&LogForm> for GrowthClass {
    type Error = OrderError;
    fn try_from(f: &LogForm) -> Result<Self, OrderError> {
        let mut g = GrowthClass::power(f.coeff(Monomial::log_x()), f.coeff(Monomial::log_log_x()));
        for (m, c) in f.terms() {
            if m == Monomial::log_x() || m == Monomial::log_log_x() {
                continue;
            }
            if m > Monomial::log_x() {
                return Err(OrderError::OutOfClass(format!("{f}: term grows faster than log x")));
            }
            if !g.c.is_zero() {
                return Err(OrderError::OutOfClass(format!("{f}: more than one intermediate term")));
            }
            g.c = c;
            g.alpha = m.a;
            g.beta = m.b;
        }
        Ok(g)
    }
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_form().fmt(f)
    }
}

impl FromStr for GrowthClass {
    type Err = OrderError;
    fn from_str(s: &str) -> Result<Self, OrderError> {
        Self::try_from(&parse_form(s)?)
    }
}

pub fn is_subradical(f: &GrowthClass) -> Result<bool, OrderError> {
    f.check()?;
    Ok(f.to_form().is_subradical())
}

fn check_pair(f: &GrowthClass, g: &GrowthClass) -> Result<(LogForm, LogForm), OrderError> {
    f.check()?;
    g.check()?;
    Ok((f.to_form(), g.to_form()))
}

pub fn lt_forall(f: &GrowthClass, g: &GrowthClass) -> Result<bool, OrderError> {
    let (f, g) = check_pair(f, g)?;
    f.lt_forall(&g)
}

pub fn lt_exists(f: &GrowthClass, g: &GrowthClass) -> Result<bool, OrderError> {
    let (f, g) = check_pair(f, g)?;
    f.lt_exists(&g)
}

/// Whether `f` and `g` have the same `<_∃` strict lower set, by the
/// criterion `f/g <_∀ f` and `g/f <_∀ g`. Quotients must stay in the class.
pub fn lower_set_equal(f: &GrowthClass, g: &GrowthClass) -> Result<bool, OrderError> {
    check_pair(f, g)?;
    for h in [f, g] {
        if !h.is_unbounded() {
            return Err(OrderError::Bounded(h.to_string()));
        }
    }
    let fg = f.divide(g)?;
    let gf = g.divide(f)?;
    Ok(lt_forall(&fg, f)? && lt_forall(&gf, g)?)
}

/// All four verdicts for a pair, as printed by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub f: String,
    pub g: String,
    pub f_subradical: bool,
    pub g_subradical: bool,
    pub lt_forall: Verdict,
    pub lt_exists: Verdict,
    pub gt_forall: Verdict,
    pub gt_exists: Verdict,
    pub lower_set_equal: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    True,
    False,
    Undefined(String),
}

impl From<Result<bool, OrderError>> for Verdict {
    fn from(r: Result<bool, OrderError>) -> Self {
        match r {
            Ok(true) => Verdict::True,
            Ok(false) => Verdict::False,
            Err(OrderError::OutOfClass(s)) => Verdict::Undefined(format!("OUT_OF_CLASS: {s}")),
            Err(e) => Verdict::Undefined(e.to_string()),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::True => write!(f, "true"),
            Verdict::False => write!(f, "false"),
            Verdict::Undefined(s) => write!(f, "undefined ({s})"),
        }
    }
}

pub fn compare(f: &GrowthClass, g: &GrowthClass) -> Result<Comparison, OrderError> {
    Ok(Comparison {
        f: f.to_string(),
        g: g.to_string(),
        f_subradical: is_subradical(f)?,
        g_subradical: is_subradical(g)?,
        lt_forall: lt_forall(f, g).into(),
        lt_exists: lt_exists(f, g).into(),
        gt_forall: lt_forall(g, f).into(),
        gt_exists: lt_exists(g, f).into(),
        lower_set_equal: lower_set_equal(f, g).into(),
    })
}

/// Twelve named growth classes used by the property checks.
pub const FIXTURES: [&str; 12] = [
    "x",
    "x/logx",
    "x^(1/2)",
    "x^2",
    "x*logx",
    "logx",
    "exp(logx^(1/2))",
    "exp(2*logx^(1/2))",
    "exp(logx^(9/10))",
    "exp(logx/llx^(11/10))",
    "exp(logx/llx)",
    "exp(logx/llx^(1/2))",
];

pub fn fixtures() -> Vec<(&'static str, GrowthClass)> {
    FIXTURES
        .iter()
        .map(|s| (*s, s.parse().expect("fixture parses")))
        .collect()
}

/// `exp(p log x/(log log x)^{1+ε}) <_∀ exp(log x/log log x) <_∀
/// exp(log x/(log log x)^{1/2}) <_∀ … `, `len` members, all subradical.
pub fn ascending_chain(p: Q, eps: Q, len: usize) -> Vec<GrowthClass> {
    let mut out = vec![GrowthClass::exp_term(p, Q::one(), -(Q::one() + eps)).expect("canonical")];
    for n in 1..len as i64 {
        out.push(GrowthClass::exp_term(Q::one(), Q::one(), -Q::new(1, n)).expect("canonical"));
    }
    out
}
