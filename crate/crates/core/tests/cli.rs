//! The command-line interface, run in-process.

use mobius_sift::cli::run;
use serde_json::Value;

fn adl(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("adl").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn schema(name: &str) -> Value {
    let path = format!("{}/schemas/{name}.schema.json", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(name: &str, args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let (code, out, err) = adl(&full);
    assert_eq!(code, 0, "{args:?}: {err}");
    let doc: Value = serde_json::from_str(&out).unwrap();
    let validator = jsonschema::validator_for(&schema(name)).unwrap();
    let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
    doc
}

#[test]
fn sums_mkw_vanishes_past_the_root() {
    let (code, out, _) = adl(&["sums", "mkw", "--x", "100", "--y", "11", "--k", "2"]);
    assert_eq!((code, out.as_str()), (0, "0\n"));
}

#[test]
fn constants_dump_contains_named_values() {
    let (code, out, _) = adl(&["constants", "dump", "--max-m", "2", "--max-n", "1", "--csv"]);
    assert_eq!(code, 0);
    let row = |m: &str, n: &str| -> f64 {
        let line = out.lines().find(|l| l.starts_with(&format!("{m},{n},"))).unwrap();
        line.split(',').nth(2).unwrap().parse().unwrap()
    };
    assert_eq!(row("1", "0"), 1.0);
    assert_eq!(row("1", "1"), -2.0);
}

#[test]
fn orders_cmp_prints_forall_verdict() {
    let (code, out, _) = adl(&["orders", "cmp", "--f", "exp(logx^0.5)", "--g", "x"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "f <_forall g: true"), "{out}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(adl(&["nonsense"]).0, 2);
    assert_eq!(adl(&["sums", "mkw", "--x", "ten", "--y", "2", "--k", "1"]).0, 2);
    let (code, _, err) = adl(&["orders", "cmp", "--f", "exp(logx^", "--g", "x"]);
    assert_eq!(code, 2);
    assert!(err.contains("position"), "{err}");
    assert_eq!(adl(&["sums", "mkw", "--x", "100", "--y", "2", "--k", "1", "--json", "--csv"]).0, 2);
    assert_eq!(adl(&["acceptance", "--sieve-ceiling", "2e9"]).0, 2);
    assert_eq!(adl(&["acceptance", "--criterion", "11"]).0, 2);
}

#[test]
fn integers_appear_as_strings_in_json() {
    let doc = assert_valid("mkw", &["sums", "mkw", "--x", "1e6", "--y", "10", "--k", "2"]);
    assert_eq!(doc["value"], "47246");
    assert_eq!(doc["x"], "1000000");
}

#[test]
fn json_outputs_match_schemas() {
    assert_valid("duality", &["sums", "duality", "--max-n", "2000", "--k", "1,2,3"]);
    assert_valid("residue", &["sums", "residue", "--m", "4", "--l", "1", "--k", "2", "--x-grid", "1e4,1e5"]);
    assert_valid("profile", &["primesums", "profile", "--y", "100", "--max-n", "2", "--max-i", "1"]);
    assert_valid("fit", &["primesums", "fit", "--power", "1"]);
    assert_valid("fit", &["primesums", "fit", "--power", "1", "--loglog-degree", "1"]);
    assert_valid("gamma_table", &["constants", "dump", "--max-m", "2", "--max-n", "2"]);
    assert_valid("hankel_scan", &["hankel", "scan", "--m", "1", "--n", "1"]);
    assert_valid("phi", &["asym", "phi", "--y", "100", "--k", "2", "--n", "2"]);
    assert_valid("compare", &["asym", "compare", "--k", "2", "--y", "5", "--x-grid", "1e4,1e5"]);
    assert_valid("orders_cmp", &["orders", "cmp", "--f", "exp(logx^0.5)", "--g", "x"]);
    assert_valid("orders_cmp", &["orders", "cmp", "--f", "exp(logx^(1/2))", "--g", "exp(logx^(9/10))"]);
    assert_valid("comb_stirling", &["comb", "dump", "--max-n", "6"]);
    assert_valid("comb_fubini", &["comb", "dump", "--max-n", "20", "--table", "fubini"]);
    assert_valid("acceptance", &["acceptance", "--criterion", "4,9", "--sieve-ceiling", "1000"]);
}

#[test]
fn acceptance_subset_reports_skips_without_failing() {
    let (code, out, _) = adl(&["acceptance", "--criterion", "1,4", "--sieve-ceiling", "1000", "--csv"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().any(|l| l.starts_with("1,SKIPPED")), "{out}");
    assert!(out.lines().any(|l| l.starts_with("4,PASS")), "{out}");
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let args = ["asym", "compare", "--k", "2", "--y", "5", "--x-grid", "1e5", "--csv"];
    assert_eq!(adl(&args).1, adl(&args).1);
}

#[test]
fn window_flags_reach_compare() {
    let (code, _, err) = adl(&["asym", "compare", "--k", "2", "--y", "5", "--x-grid", "1e4", "--power", "0.1"]);
    assert_eq!(code, 2);
    assert!(err.contains("Y0 exp"), "{err}");
}
