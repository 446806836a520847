//! Order-law and closure checks over the fixture family.

use num_traits::One;
use serde::Serialize;

use super::{ascending_chain, fixtures, lower_set_equal, lt_exists, lt_forall, GrowthClass, LogForm, Q};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl PropertyCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }
}

struct Acc {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Acc {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn done(self) -> PropertyCheck {
        PropertyCheck {
            name: self.name.to_string(),
            cases: self.cases,
            failures: self.failures,
        }
    }
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Every check; each must pass.
pub fn run_all() -> Vec<PropertyCheck> {
    let fx = fixtures();
    let forms: Vec<(&str, LogForm)> = fx.iter().map(|(s, g)| (*s, g.to_form())).collect();
    let mut out = Vec::new();

    let mut irr = Acc::new("irreflexivity");
    for (s, f) in &forms {
        irr.check(!f.lt_forall(f).unwrap_or(true), || format!("{s} <_forall {s}"));
        irr.check(!f.lt_exists(f).unwrap_or(true), || format!("{s} <_exists {s}"));
    }
    out.push(irr.done());

    let mut trans = Acc::new("transitivity");
    for (a, fa) in &forms {
        for (b, fb) in &forms {
            for (c, fc) in &forms {
                let all = fa.lt_forall(fb).unwrap() && fb.lt_forall(fc).unwrap();
                trans.check(!all || fa.lt_forall(fc).unwrap(), || format!("forall: {a} < {b} < {c}"));
                let ex = fa.lt_exists(fb).unwrap() && fb.lt_exists(fc).unwrap();
                trans.check(!ex || fa.lt_exists(fc).unwrap(), || format!("exists: {a} < {b} < {c}"));
            }
        }
    }
    out.push(trans.done());

    let mut incl = Acc::new("forall implies exists");
    for (a, fa) in &forms {
        for (b, fb) in &forms {
            incl.check(!fa.lt_forall(fb).unwrap() || fa.lt_exists(fb).unwrap(), || format!("{a}, {b}"));
        }
    }
    out.push(incl.done());

    // subradical iff log f = o(log x), i.e. f << exp(h(log x)) with h(t) = o(t)
    let mut sub = Acc::new("subradical characterization");
    let x = LogForm::power_of_x(Q::one());
    for (s, f) in &forms {
        let by_log = match f.leading() {
            None => true,
            Some((m, c)) => m < super::Monomial::log_x() || c < Q::from(0),
        };
        sub.check(f.is_subradical() == by_log, || format!("{s}"));
        sub.check(f.is_subradical() == f.lt_forall(&x).unwrap(), || format!("{s} vs <_forall x"));
    }
    for (s, expect) in [("exp(logx^(1/2))", true), ("x", false), ("exp(2*logx/llx^(11/10))", true)] {
        let f: GrowthClass = s.parse().expect("parses");
        sub.check(f.to_form().is_subradical() == expect, || format!("{s} should be {expect}"));
    }
    out.push(sub.done());

    let mut ring = Acc::new("subradical ring closure");
    let subs: Vec<&(&str, LogForm)> = forms.iter().filter(|(_, f)| f.is_subradical()).collect();
    for (a, fa) in &subs {
        for (b, fb) in &subs {
            ring.check(fa.add(fb).is_subradical(), || format!("{a} + {b}"));
            ring.check(fa.mul(fb).is_subradical(), || format!("{a} * {b}"));
        }
        for p in [q(1, 3), q(1, 2), q(2, 1), q(7, 1)] {
            ring.check(fa.pow(p).is_subradical(), || format!("({a})^{p}"));
        }
    }
    // g <_forall h iff g^p <_forall h
    for (_, h) in &forms {
        for (a, g) in &forms {
            for p in [q(1, 2), q(3, 1)] {
                let direct = g.lt_forall(h).unwrap();
                ring.check(direct == g.pow(p).lt_forall(h).unwrap(), || format!("{a}^{p} lower-set membership"));
            }
        }
    }
    out.push(ring.done());

    let mut chain = Acc::new("ascending chain");
    let members = ascending_chain(q(2, 1), q(1, 10), 6);
    for w in members.windows(2) {
        chain.check(lt_forall(&w[0], &w[1]).unwrap(), || format!("{} < {}", w[0], w[1]));
    }
    let xg = GrowthClass::power(Q::one(), q(0, 1));
    for m in &members {
        chain.check(super::is_subradical(m).unwrap(), || format!("{m} subradical"));
        chain.check(lt_forall(m, &xg).unwrap(), || format!("{m} < x"));
    }
    let head: GrowthClass = "exp(logx^(9/10))".parse().expect("parses");
    chain.check(lt_forall(&head, &members[0]).unwrap(), || "exp(logx^(9/10)) < chain head".into());
    out.push(chain.done());

    let mut lower = Acc::new("lower-set instances");
    let xl: GrowthClass = "x/logx".parse().expect("parses");
    let x2: GrowthClass = "x^2".parse().expect("parses");
    lower.check(lower_set_equal(&xg, &xl) == Ok(true), || "x ~ x/logx".into());
    lower.check(lower_set_equal(&xg, &x2) == Ok(false), || "x !~ x^2".into());
    lower.check(!lt_forall(&xl, &xg).unwrap(), || "x/logx <_forall x".into());
    // the <_exists lower sets of x and x/log x agree on every fixture
    for (s, h) in &fx {
        lower.check(lt_exists(h, &xg).unwrap() == lt_exists(h, &xl).unwrap(), || format!("{s} membership"));
    }
    out.push(lower.done());

    // log Y with Y = exp(log x/(log log x)^{1+ε}) is <_exists-maximal among
    // logs of subradical fixtures; log exp((log x)^{9/10}) is not.
    let mut maximal = Acc::new("maximality of the sifting bound's logarithm");
    let log_y = ascending_chain(Q::one(), q(1, 10), 1)[0].to_form().log_form().expect("unbounded");
    for (s, f) in &forms {
        if f.is_subradical() && f.is_unbounded() {
            let ls = f.log_form().expect("unbounded");
            maximal.check(!log_y.lt_exists(&ls).unwrap(), || format!("log Y <_exists log {s}"));
        }
    }
    let lp: GrowthClass = "exp(logx^(9/10))".parse().expect("parses");
    let lp = lp.to_form().log_form().expect("unbounded");
    maximal.check(lp.lt_exists(&log_y).unwrap(), || "log exp(logx^(9/10)) not below log Y".into());
    maximal.check(!log_y.lt_exists(&lp).unwrap(), || "log Y below log exp(logx^(9/10))".into());
    out.push(maximal.done());

    out
}
