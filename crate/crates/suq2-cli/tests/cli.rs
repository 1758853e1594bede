//! End-to-end checks of the binary plus parser properties.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::Command;
use suq2::pbw::Letter;
use suq2_cli::parser::{self, Expr};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_suq2"))
}

fn run_json(args: &[&str]) -> serde_json::Value {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn integral_schema_and_value() {
    let v = run_json(&["integral", "--form", "b d(b*)", "--power", "1", "--q", "1/2"]);
    assert!(v.get("query").is_some());
    let result = v.get("result").unwrap();
    assert!(result.get("num").unwrap().is_array());
    assert!(result.get("den").unwrap().is_array());
    assert!(v.get("notes").unwrap().is_array());
    let at = v.get("value_at_q").unwrap().as_f64().unwrap();
    assert!((at - 8.0 / 3.0).abs() < 1e-12);
    // symbolic run leaves value_at_q null
    let v = run_json(&["integral", "--form", "b d(b*)", "--power", "1"]);
    assert!(v.get("value_at_q").unwrap().is_null());
}

#[test]
fn delta_and_d_flavors_differ_where_they_should() {
    // at |D|^-3 the d-form integral vanishes while the delta-form gives 2
    let d = run_json(&["integral", "--form", "a* d(a)", "--power", "3"]);
    assert_eq!(d["result"]["display"], "0");
    let del = run_json(&["integral", "--form", "a* delta(a)", "--power", "3"]);
    assert_eq!(del["result"]["display"], "2");
    // and --with-F restores the plain value for the d-form
    let df = run_json(&["integral", "--form", "a* d(a)", "--power", "3", "--with-F"]);
    assert_eq!(df["result"]["display"], "2");
}

#[test]
fn action_and_integral_j() {
    let v = run_json(&["action", "--form", "a* d(a)", "--with-J"]);
    assert_eq!(v["c3"]["result"]["display"], "2");
    assert_eq!(v["c2"]["result"]["display"], "-8");
    let v = run_json(&[
        "integral-j", "--left", "a* d(a)", "--right", "a* d(a)", "--kind", "i",
    ]);
    assert_eq!(v["result"]["display"], "2");
}

#[test]
fn table_matches_reference_strings() {
    let v = run_json(&["table1"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["form"], "a*da");
    assert_eq!(rows[0]["I A|D|^-3"]["result"]["display"], "2");
    assert_eq!(
        rows[1]["I A|D|^-1"]["result"]["display"],
        "-2/(q^2 - 1)"
    );
}

#[test]
fn verify_suite_exit_codes() {
    let out = bin()
        .args(["verify", "--suite", "pbw", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("[ok]")));
}

#[test]
fn oracle_runs_small() {
    let v = run_json(&[
        "oracle", "--form", "b delta(b*)", "--power", "1", "--q", "1/2", "--max-2j", "24",
    ]);
    let re = v["value_re"].as_f64().unwrap();
    assert!((re - 8.0 / 3.0).abs() < 1e-6, "got {re}");
}

#[test]
fn bad_input_reports_errors() {
    let out = bin()
        .args(["integral", "--form", "d(d(a))", "--power", "3"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("one-form"), "stderr: {err}");
    let out = bin()
        .args(["integral", "--form", "a b", "--power", "3"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

// ---------------------------------------------------------------------------
// Parser properties.
// ---------------------------------------------------------------------------

fn random_expr(rng: &mut ChaCha8Rng, depth: usize, allow_form: bool) -> Expr {
    let letters = [Letter::A, Letter::AStar, Letter::B, Letter::BStar];
    if depth == 0 {
        return match rng.gen_range(0..3) {
            0 => Expr::Gen(letters[rng.gen_range(0..4)]),
            1 => Expr::Int(num::BigInt::from(rng.gen_range(1..9))),
            _ => Expr::QVar,
        };
    }
    match rng.gen_range(0..6) {
        0 => Expr::Sum(
            (0..rng.gen_range(2..4))
                .map(|_| (rng.gen_bool(0.7), random_expr(rng, depth - 1, allow_form)))
                .collect(),
        ),
        1 => Expr::Product(
            (0..rng.gen_range(2..4))
                .map(|_| random_expr(rng, depth - 1, false))
                .collect(),
        ),
        2 => Expr::Pow(
            Box::new(random_expr(rng, depth - 1, false)),
            rng.gen_range(-3..=3),
        ),
        3 if allow_form => Expr::D(Box::new(random_expr(rng, depth - 1, false))),
        4 if allow_form => Expr::Delta(Box::new(random_expr(rng, depth - 1, false))),
        _ => random_expr(rng, 0, false),
    }
}

#[test]
fn parse_print_identity_on_random_expressions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..100 {
        let e = random_expr(&mut rng, 3, true);
        let printed = parser::print(&e);
        let reparsed = parser::parse(&printed)
            .unwrap_or_else(|err| panic!("case {i}: {printed} failed: {err}"));
        // printing is a normal form: print(parse(print(e))) == print(e)
        assert_eq!(parser::print(&reparsed), printed, "case {i}");
    }
}

#[test]
fn parser_position_errors() {
    let err = parser::parse("a* d(a").unwrap_err();
    assert!(err.to_string().contains("byte"));
    assert!(parser::parse("c").is_err());
}
