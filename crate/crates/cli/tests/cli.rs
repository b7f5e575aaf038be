use std::process::{Command, Output};

use serde_json::Value;

const SCHEMA: &str = include_str!("../../../docs/output.schema.json");

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyode"))
        .args(args)
        .env_remove("POLYODE_QUAD_TOL")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Parses stdout and checks it against the published schema.
fn document(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).expect("utf-8");
    let doc: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    let schema: Value = serde_json::from_str(SCHEMA).expect("schema parses");
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator
        .iter_errors(&doc)
        .map(|e| format!("{e} at {}", e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "{errors:?}\n{text}");
    doc
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|s| s.as_str().expect("string").to_string())
        .collect()
}

const HERMITE: [&str; 10] = [
    "--a20", "0", "--a21", "0", "--a22", "1", "--a10", "-2", "--a11", "0",
];
const DEGENERATE: [&str; 10] = [
    "--a20", "1", "--a21", "0", "--a22", "0", "--a10", "-4", "--a11", "1",
];

fn with<'a>(head: &[&'a str], params: &[&'a str], tail: &[&'a str]) -> Vec<&'a str> {
    head.iter().chain(params).chain(tail).copied().collect()
}

#[test]
fn solve_hermite_all_methods() {
    let out = run(&with(
        &["solve"],
        &HERMITE,
        &["--n", "2", "--method", "all"],
    ));
    assert_eq!(code(&out), 0);
    let doc = document(&out);
    let r = &doc["results"];
    for m in ["recurrence", "closed", "oracle"] {
        assert_eq!(
            strings(&r["methods"][m]["coefficients"]),
            ["-2/1", "0/1", "4/1"],
            "{m}"
        );
    }
    assert_eq!(r["agreement"]["equal"], Value::Bool(true));
    assert_eq!(r["tau"], "-4/1");
    assert_eq!(r["case"], "IV");
}

#[test]
fn solve_degree_zero() {
    let out = run(&with(&["solve"], &HERMITE, &["--n", "0"]));
    assert_eq!(code(&out), 0);
    assert_eq!(
        strings(&document(&out)["results"]["methods"]["recurrence"]["coefficients"]),
        ["1/1"]
    );
}

#[test]
fn solve_degenerate_denominator() {
    let out = run(&with(&["solve"], &DEGENERATE, &["--n", "6"]));
    assert_eq!(code(&out), 0);
    let doc = document(&out);
    assert_eq!(
        doc["results"]["methods"]["recurrence"]["engine"],
        "series_oracle"
    );
    assert!(strings(&doc["diagnostics"])
        .iter()
        .any(|d| d.contains("denominator vanishes")));

    let out = run(&with(
        &["solve"],
        &DEGENERATE,
        &["--n", "6", "--no-fallback"],
    ));
    assert_eq!(code(&out), 3);
    let doc = document(&out);
    assert_eq!(doc["error"]["kind"], "DegenerateDenominator");
    assert!(String::from_utf8_lossy(&out.stderr).contains("denominator vanishes"));
}

#[test]
fn solve_text_formats() {
    let out = run(&with(
        &["solve"],
        &HERMITE,
        &["--n", "2", "--format", "csv"],
    ));
    assert_eq!(code(&out), 0);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "method,n,power,coefficient\nrecurrence,2,0,-2/1\nrecurrence,2,1,0/1\nrecurrence,2,2,4/1\n"
    );
    let out = run(&with(
        &["solve"],
        &HERMITE,
        &["--n", "2", "--format", "latex"],
    ));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "% recurrence\ny_{2}(x) = 4x^{2} - 2\n"
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["solve", "--a20", "one", "--n", "2"])), 2);
    assert_eq!(code(&run(&["solve", "--a22", "1"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    let out = run(&["solve", "--n", "2"]);
    assert_eq!(code(&out), 2);
    assert_eq!(document(&out)["error"]["kind"], "InvalidParams");
    let out = run(&["catalog", "--name", "jacobi", "--args", "alpha=1"]);
    assert_eq!(code(&out), 2);
    assert_eq!(document(&out)["error"]["kind"], "MissingArg");
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = ["verify", "--trials", "10", "--nmax", "4", "--seed", "7"];
    let first = run(&args);
    assert_eq!(
        code(&first),
        0,
        "{}",
        String::from_utf8_lossy(&first.stdout)
    );
    let doc = document(&first);
    assert_eq!(doc["results"]["passed"], Value::Bool(true));
    assert_eq!(doc["results"]["suites"].as_array().unwrap().len(), 6);
    assert!(doc["results"]["first_failure"].is_null());
    assert_eq!(run(&args).stdout, first.stdout);
}

#[test]
fn verify_single_case() {
    let out = run(&["verify", "--case", "V", "--trials", "4", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(document(&out)["inputs"]["case"], "V");
    assert_eq!(code(&run(&["verify", "--case", "VII"])), 2);
}

#[test]
fn verify_suite_filter() {
    let out = run(&[
        "verify", "--suite", "aim", "--suite", "pearson", "--trials", "3",
    ]);
    assert_eq!(code(&out), 0);
    let suites: Vec<String> = document(&out)["results"]["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(suites, ["aim", "pearson"]);
}

#[test]
fn catalog_laguerre() {
    let out = run(&[
        "catalog", "--name", "laguerre", "--args", "alpha=0", "--nmax", "3",
    ]);
    assert_eq!(code(&out), 0);
    let doc = document(&out);
    let rows = doc["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let ratios: Vec<&str> = rows.iter().map(|r| r["ratio"].as_str().unwrap()).collect();
    assert_eq!(ratios, ["1/1", "1/1", "2/1", "6/1"]);
    assert_eq!(doc["results"]["case"], "V");
}

#[test]
fn catalog_listing() {
    let out = run(&["catalog"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        document(&out)["results"]["entries"]
            .as_array()
            .unwrap()
            .len(),
        11
    );
}

#[test]
fn aim_hermite_zero_set() {
    let out = run(&with(&["aim"], &HERMITE, &["--nmax", "3"]));
    assert_eq!(code(&out), 0);
    let doc = document(&out);
    assert_eq!(
        strings(&doc["results"]["zero_set"]),
        ["0/1", "-2/1", "-4/1", "-6/1"]
    );
    assert_eq!(doc["results"]["passed"], Value::Bool(true));
}

#[test]
fn theorem2_residual() {
    let laguerre = [
        "--a20", "0", "--a21", "1", "--a22", "0", "--a10", "-1", "--a11", "1",
    ];
    let out = run(&with(
        &["theorem2"],
        &laguerre,
        &["--Q", "0,0,1", "--n", "2"],
    ));
    assert_eq!(code(&out), 0);
    let doc = document(&out);
    assert!(doc["results"]["residual"].as_f64().unwrap() <= 1e-8);
    assert_eq!(strings(&doc["results"]["Q"]), ["0/1", "0/1", "1/1"]);
}

#[test]
fn weight_legendre_and_violation() {
    let legendre = [
        "--a20", "-1", "--a21", "0", "--a22", "1", "--a10", "-2", "--a11", "0",
    ];
    let out = run(&with(&["weight"], &legendre, &["--nmax", "3"]));
    assert_eq!(code(&out), 0);
    let doc = document(&out);
    assert_eq!(doc["results"]["passed"], Value::Bool(true));
    assert_eq!(
        doc["results"]["inner_products"].as_array().unwrap().len(),
        10
    );

    let out = run(&["weight", "--a22", "1", "--a10", "2"]);
    assert_eq!(code(&out), 3);
    let doc = document(&out);
    assert!(strings(&doc["diagnostics"])
        .iter()
        .any(|d| d.contains("constraint violated")));
}

#[test]
fn classify_reports_case() {
    let out = run(&with(&["classify"], &HERMITE, &[]));
    assert_eq!(code(&out), 0);
    let doc = document(&out);
    assert_eq!(doc["results"]["case"], "IV");
    assert_eq!(doc["results"]["weight_formula"], "W4");
}

#[test]
fn quad_tolerance_from_environment() {
    let legendre = [
        "weight", "--a20", "-1", "--a22", "1", "--a10", "-2", "--nmax", "1",
    ];
    let out = Command::new(env!("CARGO_BIN_EXE_polyode"))
        .args(legendre)
        .env("POLYODE_QUAD_TOL", "1e-12")
        .output()
        .unwrap();
    assert_eq!(
        document(&out)["inputs"]["quad"]["tol"].as_f64(),
        Some(1e-12)
    );
    let out = Command::new(env!("CARGO_BIN_EXE_polyode"))
        .args(legendre)
        .args(["--quad-tol", "1e-9"])
        .env("POLYODE_QUAD_TOL", "1e-12")
        .output()
        .unwrap();
    assert_eq!(document(&out)["inputs"]["quad"]["tol"].as_f64(), Some(1e-9));
}

#[test]
fn verify_failure_bundle() {
    let out = run(&[
        "verify",
        "--suite",
        "orthogonality",
        "--trials",
        "2",
        "--quad-tol",
        "1e-30",
    ]);
    assert_eq!(code(&out), 1);
    let doc = document(&out);
    let bundle = &doc["results"]["first_failure"];
    assert_eq!(bundle["suite"], "orthogonality");
    let reproduce = bundle["reproduce"].as_str().unwrap();
    assert!(reproduce.contains("--quad-tol 1e-30"), "{reproduce}");
    let args: Vec<&str> = reproduce.split_whitespace().skip(1).collect();
    let again = run(&args);
    assert_eq!(code(&again), 1);
    assert_eq!(
        document(&again)["results"]["first_failure"]["params"],
        bundle["params"]
    );
}
