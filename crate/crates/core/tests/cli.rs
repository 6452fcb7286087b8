use std::process::{Command, Output};

use serde_json::Value;

fn hsdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsdist"))
        .args(args)
        .output()
        .expect("failed to run hsdist")
}

fn stdout(args: &[&str]) -> String {
    let out = hsdist(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf-8")
}

fn reports(args: &[&str]) -> Vec<Value> {
    match serde_json::from_str(&stdout(args)).expect("valid JSON") {
        Value::Array(v) => v,
        other => panic!("expected an array, got {other}"),
    }
}

#[test]
fn scalar_examples() {
    assert_eq!(stdout(&["dist", "hs", "pdf", "--loc", "0", "--scale", "1", "--x", "0"]), "0.5\n");
    assert_eq!(stdout(&["dist", "hs", "quantile", "--p", "0.5"]), "0\n");
    assert_eq!(
        stdout(&["dist", "hs-sum", "pdf", "--n", "2", "--scale", "3.14159265358979", "--x", "0"]),
        "0.101321183642338\n"
    );
    assert_eq!(stdout(&["dist", "hs", "cdf", "--loc", "-2", "--x", "-2"]), "0.5\n");
}

#[test]
fn samples_are_csv_and_reproducible() {
    let args = ["dist", "hs-sum", "sample", "--n", "3", "--count", "5", "--seed", "9"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "value");
    assert_eq!(lines.len(), 6);
    assert!(lines[1..].iter().all(|l| l.parse::<f64>().is_ok()));
    assert_ne!(a, stdout(&["dist", "hs-sum", "sample", "--n", "3", "--count", "5", "--seed", "10"]));
}

#[test]
fn figure1_grid() {
    let csv = stdout(&["figure1", "--lo", "-8", "--hi", "8", "--step", "0.01"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("y,hs,normal,logistic"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 1601);
    let zero = rows.iter().find(|r| r[0] == 0.0).expect("row at y = 0");
    assert_eq!(zero[1], 0.5);
    assert!((zero[2] - 0.398_942).abs() < 1e-6);
    assert!((zero[3] - 0.453_450).abs() < 1e-6);
    for col in 1..4 {
        assert!(rows.iter().all(|r| r[col] > 0.0));
        let riemann: f64 = rows.iter().map(|r| r[col]).sum::<f64>() * 0.01;
        assert!((riemann - 1.0).abs() < 1e-3, "column {col}: {riemann}");
    }
    assert_eq!(csv, stdout(&["figure1", "--lo", "-8", "--hi", "8", "--step", "0.01"]));
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let out = hsdist(&["figure1", "--lo", "-1", "--hi", "1", "--step", "0.5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, stdout(&["figure1", "--lo", "-1", "--hi", "1", "--step", "0.5"]));
}

const REPORT_KEYS: [&str; 9] = ["mean", "n", "params", "passed", "scenario", "seed", "ks_statistic", "threshold", "variance"];

fn check_schema(r: &Value) {
    let obj = r.as_object().expect("object");
    assert_eq!(obj.len(), REPORT_KEYS.len());
    for k in REPORT_KEYS {
        assert!(obj.contains_key(k), "missing {k}");
    }
}

#[test]
fn twin_report() {
    let args = ["twin", "--rho", "0", "--reps", "100000", "--seed", "7"];
    let r = reports(&args);
    assert_eq!(r.len(), 1);
    check_schema(&r[0]);
    assert_eq!(r[0]["passed"], true);
    assert_eq!(r[0]["scenario"], "twin");
    assert_eq!(r[0]["seed"], 7);
    let v = r[0]["variance"].as_f64().unwrap();
    assert!((v - 2.4674).abs() <= 0.05 * 2.4674, "{v}");
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn jeffreys_reports() {
    let r = reports(&["jeffreys", "--mode", "both", "--reps", "100000"]);
    assert_eq!(r.len(), 3);
    let names: Vec<&str> = r.iter().map(|x| x["scenario"].as_str().unwrap()).collect();
    assert_eq!(names, ["jeffreys-multinomial", "jeffreys-binomial", "jeffreys-two-sample"]);
    for x in &r {
        check_schema(x);
        assert_eq!(x["passed"], true, "{x}");
    }
}

#[test]
fn iv_report() {
    let r = reports(&["iv", "--rho-yd", "0", "--sigma-y", "1", "--p-d", "0.5", "--n", "10000", "--reps", "100000"]);
    check_schema(&r[0]);
    assert_eq!(r[0]["passed"], true);
    // p_d = 0.5 gives sigma_d = 0.5, eta = 2
    assert_eq!(r[0]["params"]["eta"], 2.0);
    assert!((r[0]["params"]["target_location"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-14);
}

#[test]
fn unit_eta_iv_has_zero_target_location() {
    // eta = 1 needs sigma_y = sigma_d = 0.5 with rho = 0
    let r = reports(&["iv", "--rho-yd", "0", "--sigma-y", "0.5", "--p-d", "0.5", "--reps", "20000"]);
    assert_eq!(r[0]["params"]["target_location"], 0.0);
}

#[test]
fn samples_flag_writes_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("iv.csv");
    stdout(&["iv", "--rho-yd", "0.6", "--reps", "50", "--samples", path.to_str().unwrap()]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("beta_iv,beta_ls\n"));
    assert_eq!(text.lines().count(), 51);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| hsdist(args).status.code().unwrap();
    assert_eq!(code(&["dist", "hs", "pdf", "--x", "0"]), 0);
    assert_eq!(code(&["dist", "hs", "quantile", "--p", "2"]), 2);
    assert_eq!(code(&["dist", "hs", "pdf", "--scale", "0", "--x", "0"]), 2);
    assert_eq!(code(&["figure1", "--lo", "1", "--hi", "0"]), 2);
    assert_eq!(code(&["twin", "--rho", "1.5"]), 2);
    assert_eq!(code(&["iv", "--rho-yd", "0.6", "--p-d", "0.5", "--sigma-d", "0.3"]), 2);
    assert_eq!(code(&["jeffreys", "--mode", "sideways"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn diagnostics_are_one_line() {
    let out = hsdist(&["twin", "--rho", "-1"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error:"));
    assert!(out.stdout.is_empty());
}

#[test]
fn mismatched_models_fail_with_code_one() {
    // a tiny-N instrument is far from its limit law, so the KS check must fail
    let out = hsdist(&["iv", "--rho-yd", "0.9", "--p-d", "0.1", "--n", "4", "--reps", "100000"]);
    assert_eq!(out.status.code(), Some(1));
    let r: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r[0]["passed"], false);
}
