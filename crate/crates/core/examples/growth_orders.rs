//! Deciding <_forall, <_exists and lower-set equality on growth classes.

use mobius_sift::orders::{ascending_chain, compare, properties, GrowthClass, Q};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pairs = [
        ("exp(logx^0.5)", "x"),
        ("x", "x/logx"),
        ("x", "x^2"),
        ("exp(logx^(1/2))", "exp(2*logx^(1/2))"),
        ("exp(logx^(1/2))", "exp(logx^(9/10))"),
    ];
    for (f, g) in pairs {
        let c = compare(&f.parse::<GrowthClass>()?, &g.parse::<GrowthClass>()?)?;
        println!(
            "{f} vs {g}: <_forall {}, <_exists {}, lower sets equal {}",
            c.lt_forall, c.lt_exists, c.lower_set_equal
        );
    }
    for m in ascending_chain(Q::new(2, 1), Q::new(1, 10), 4) {
        println!("chain: {m}");
    }
    for p in properties::run_all() {
        println!("{}: {} cases, passed {}", p.name, p.cases, p.passed());
    }
    Ok(())
}
