//! Expression syntax for growth classes.
//!
//! ```text
//! sum     := product (("+" | "-") product)*
//! product := power (("*" | "/") power)*
//! power   := unary ("^" exponent)?
//! unary   := "-" unary | atom
//! atom    := "x" | "logx" | "llx" | number | "exp" "(" sum ")" | "(" sum ")"
//! exponent:= ["-"] number | "(" ["-"] number ["/" number] ")"
//! ```
//!
//! At top level `*`, `/`, `^` act on functions and `+` takes the dominant
//! summand. Inside `exp(...)` the argument must be a sum of terms
//! `c (log x)^a (log log x)^b`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{LogForm, Monomial, OrderError, Q};

#[derive(Debug, Error, PartialEq)]
#[error("at position {pos}: expected {expected}, found {found}")]
pub struct ParseError {
    pub pos: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(Q),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Num(q) => write!(f, "number {q}"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn err(pos: usize, expected: &str, found: impl fmt::Display) -> ParseError {
    ParseError {
        pos,
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((start, Tok::Num(decimal(&text).ok_or_else(|| err(start, "a decimal number", &text))?)));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(err(i, "a token", format!("'{c}'")));
        }
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

/// Exact value of a decimal literal with at most 15 significant digits.
fn decimal(text: &str) -> Option<Q> {
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if frac.contains('.') || int.len() + frac.len() > 15 || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits: i64 = format!("{int}{frac}").parse().ok()?;
    Some(Q::new(digits, 10i64.pow(frac.len() as u32)))
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    X,
    LogX,
    LlX,
    Num(Q),
    Exp(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Q),
    Neg(Box<Expr>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.pos(), &format!("'{c}'"), self.peek()))
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.product()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.product()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.product()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.power()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.power()?));
            } else if self.eat('/') {
                e = Expr::Div(Box::new(e), Box::new(self.power()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if self.eat('^') {
            Ok(Expr::Pow(Box::new(base), self.exponent()?))
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(s) => match s.as_str() {
                "x" => Ok(Expr::X),
                "logx" => Ok(Expr::LogX),
                "llx" => Ok(Expr::LlX),
                "exp" => {
                    self.expect('(')?;
                    let e = self.sum()?;
                    self.expect(')')?;
                    Ok(Expr::Exp(Box::new(e)))
                }
                _ => Err(err(pos, "x, logx, llx or exp", format!("'{s}'"))),
            },
            Tok::Num(q) => Ok(Expr::Num(q)),
            Tok::Sym('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            t => Err(err(pos, "x, logx, llx, exp, a number or '('", t)),
        }
    }

    fn signed_number(&mut self) -> Result<Q, ParseError> {
        let neg = self.eat('-');
        let pos = self.pos();
        match self.bump() {
            Tok::Num(q) => Ok(if neg { -q } else { q }),
            t => Err(err(pos, "a number", t)),
        }
    }

    fn exponent(&mut self) -> Result<Q, ParseError> {
        if self.eat('(') {
            let mut q = self.signed_number()?;
            if self.eat('/') {
                let pos = self.pos();
                let d = self.signed_number()?;
                if d.is_zero() {
                    return Err(err(pos, "a nonzero denominator", "0"));
                }
                q /= d;
            }
            self.expect(')')?;
            Ok(q)
        } else {
            self.signed_number()
        }
    }
}

type Poly = BTreeMap<Monomial, Q>;

fn out(msg: impl Into<String>) -> OrderError {
    OrderError::OutOfClass(msg.into())
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut p = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            *p.entry(Monomial::new(ma.a + mb.a, ma.b + mb.b)).or_insert_with(Q::zero) += ca * cb;
        }
    }
    p.retain(|_, c| !c.is_zero());
    p
}

fn single(p: &Poly) -> Option<(Monomial, Q)> {
    if p.len() == 1 {
        p.iter().next().map(|(m, c)| (*m, *c))
    } else {
        None
    }
}

/// `e` read as a sum of log-monomials (the argument of `exp`).
fn as_poly(e: &Expr) -> Result<Poly, OrderError> {
    let mono = |a: i64, b: i64| Poly::from([(Monomial::new(Q::from(a), Q::from(b)), Q::one())]);
    Ok(match e {
        Expr::X => return Err(out("x inside exp grows faster than any power of log x")),
        Expr::Exp(_) => return Err(out("nested exp")),
        Expr::LogX => mono(1, 0),
        Expr::LlX => mono(0, 1),
        Expr::Num(q) => Poly::from([(Monomial::new(Q::zero(), Q::zero()), *q)]),
        Expr::Neg(a) => as_poly(a)?.into_iter().map(|(m, c)| (m, -c)).collect(),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let sign = if matches!(e, Expr::Sub(..)) { -Q::one() } else { Q::one() };
            let mut p = as_poly(a)?;
            for (m, c) in as_poly(b)? {
                *p.entry(m).or_insert_with(Q::zero) += sign * c;
            }
            p.retain(|_, c| !c.is_zero());
            p
        }
        Expr::Mul(a, b) => poly_mul(&as_poly(a)?, &as_poly(b)?),
        Expr::Div(a, b) => {
            let (m, c) = single(&as_poly(b)?).ok_or_else(|| out("division by a sum inside exp"))?;
            let inv = Poly::from([(Monomial::new(-m.a, -m.b), c.recip())]);
            poly_mul(&as_poly(a)?, &inv)
        }
        Expr::Pow(a, q) => {
            let p = as_poly(a)?;
            match single(&p) {
                Some((m, c)) if c.is_one() => Poly::from([(Monomial::new(m.a * q, m.b * q), c)]),
                Some((m, c)) if q.is_integer() => {
                    let n = i32::try_from(q.to_integer()).map_err(|_| out("exponent too large"))?;
                    Poly::from([(Monomial::new(m.a * q, m.b * q), c.pow(n))])
                }
                _ if q.is_integer() && !q.is_negative() => {
                    let mut r = Poly::from([(Monomial::new(Q::zero(), Q::zero()), Q::one())]);
                    for _ in 0..q.to_integer() {
                        r = poly_mul(&r, &p);
                    }
                    r
                }
                _ => return Err(out("non-integer power of a sum or of a scaled term inside exp")),
            }
        }
    })
}

/// `e` read as a positive function; returns the form of its logarithm.
fn as_fn(e: &Expr) -> Result<LogForm, OrderError> {
    Ok(match e {
        Expr::X => LogForm::power_of_x(Q::one()),
        Expr::LogX => LogForm::from_terms([(Monomial::log_log_x(), Q::one())]),
        Expr::LlX => return Err(out("log log x needs a log log log x term")),
        Expr::Num(q) if q.is_positive() => LogForm::bounded(),
        Expr::Num(q) => return Err(out(format!("nonpositive constant {q}"))),
        Expr::Exp(a) => LogForm::from_terms(as_poly(a)?),
        Expr::Add(a, b) => as_fn(a)?.add(&as_fn(b)?),
        Expr::Sub(..) | Expr::Neg(_) => return Err(out("differences of functions have no definite sign")),
        Expr::Mul(a, b) => as_fn(a)?.mul(&as_fn(b)?),
        Expr::Div(a, b) => as_fn(a)?.div(&as_fn(b)?),
        Expr::Pow(a, q) => as_fn(a)?.pow(*q),
    })
}

pub fn parse_form(s: &str) -> Result<LogForm, OrderError> {
    let mut p = Parser { toks: lex(s)?, at: 0 };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(err(p.pos(), "an operator or end of input", p.peek()).into());
    }
    as_fn(&e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn forms() {
        let f = parse_form("exp(logx^0.5)").unwrap();
        assert_eq!(f.leading(), Some((Monomial::new(q(1, 2), q(0, 1)), q(1, 1))));
        let f = parse_form("x/logx").unwrap();
        assert_eq!(f.coeff(Monomial::log_x()), q(1, 1));
        assert_eq!(f.coeff(Monomial::log_log_x()), q(-1, 1));
        let f = parse_form("3*exp(2*logx/llx^(11/10))").unwrap();
        assert_eq!(f.leading(), Some((Monomial::new(q(1, 1), q(-11, 10)), q(2, 1))));
        let f = parse_form("exp(logx^(1/2) + 3*llx)").unwrap();
        assert_eq!(f.coeff(Monomial::log_log_x()), q(3, 1));
        assert_eq!(parse_form("x^-1").unwrap(), LogForm::power_of_x(q(-1, 1)));
        assert_eq!(parse_form("x + x^2").unwrap(), LogForm::power_of_x(q(2, 1)));
        assert_eq!(parse_form("exp((2*logx)^2/logx^2)").unwrap(), LogForm::bounded());
    }

    #[test]
    fn errors_carry_position() {
        match parse_form("exp(logx^0.5") {
            Err(OrderError::Parse(e)) => {
                assert_eq!(e.pos, 12);
                assert_eq!(e.expected, "')'");
            }
            other => panic!("{other:?}"),
        }
        match parse_form("x * foo") {
            Err(OrderError::Parse(e)) => assert_eq!(e.pos, 4),
            other => panic!("{other:?}"),
        }
        match parse_form("x ^ ") {
            Err(OrderError::Parse(e)) => assert_eq!(e.expected, "a number"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_form("x $"), Err(OrderError::Parse(ParseError { pos: 2, .. }))));
        assert!(matches!(parse_form("x x"), Err(OrderError::Parse(ParseError { pos: 2, .. }))));
    }

    #[test]
    fn out_of_class_inputs() {
        for s in ["exp(x)", "llx", "x - logx", "exp(exp(logx))", "exp(logx/(logx + llx))", "-2"] {
            assert!(matches!(parse_form(s), Err(OrderError::OutOfClass(_))), "{s}");
        }
    }
}
