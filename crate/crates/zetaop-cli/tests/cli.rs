//! End-to-end tests of the command-line surface: exit-code discipline,
//! JSON/CSV schemas, and file artifacts.

use std::path::PathBuf;
use std::process::{Command, Output};

fn zetaop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetaop"))
        .args(args)
        .env_remove("ZOL_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zetaop-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn eval_zeta_prints_value_json() {
    let out = zetaop(&["eval", "zeta", "--s", "2,0", "--tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let re = json["value"]["re"].as_f64().unwrap();
    assert!((re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-11, "{re}");
    assert!(json["value"]["im"].as_f64().unwrap().abs() < 1e-13);
    assert!(json["est_error"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn eval_hurwitz_closed_form_point() {
    // ζ(0, a) = 1/2 − a
    let out = zetaop(&["eval", "hurwitz", "--s", "0,0", "--a", "0.25", "--tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!((json["value"]["re"].as_f64().unwrap() - 0.25).abs() < 1e-10);
}

#[test]
fn eval_at_pole_is_numeric_error() {
    let out = zetaop(&["eval", "zeta", "--s", "1,0"]);
    assert_eq!(out.status.code(), Some(3));
    let out = zetaop(&["eval", "hurwitz", "--s", "2,0", "--a", "1.5"]);
    assert_eq!(out.status.code(), Some(3), "a out of (0,1] is a numeric error");
}

#[test]
fn eval_lfunc_both_methods() {
    for method in ["hurwitz", "euler_maclaurin"] {
        let out = zetaop(&[
            "eval", "lfunc", "--s", "2,0", "--modulus", "4", "--char-index", "1", "--method",
            method, "--tol", "1e-10",
        ]);
        assert_eq!(out.status.code(), Some(0), "method {method}");
        let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
        let re = json["value"]["re"].as_f64().unwrap();
        assert!((re - 0.915_965_594_177_219).abs() < 1e-9, "{method}: {re}");
    }
    // character index out of range
    let out = zetaop(&["eval", "lfunc", "--s", "2,0", "--modulus", "4", "--char-index", "7"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(zetaop(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(zetaop(&["eval", "zeta", "--bogus-flag", "1"]).status.code(), Some(2));
    assert_eq!(zetaop(&["eval", "zeta", "--s", "not-a-number"]).status.code(), Some(2));
}

#[test]
fn coeff_tables_are_csv() {
    let out = zetaop(&["coeff", "bernoulli", "--n", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,numerator,denominator");
    assert_eq!(text.lines().count(), 14);
    // spot checks: B_2 = 1/6, B_12 = −691/2730
    assert!(text.lines().any(|l| l == "2,1,6"));
    assert!(text.lines().any(|l| l == "12,-691,2730"));

    let p = zetaop(&["coeff", "p", "--n", "5", "--s", "2,0"]);
    let p_text = stdout_str(&p);
    assert_eq!(p_text.lines().next().unwrap(), "n,re,im");
    assert_eq!(p_text.lines().count(), 7);
    // p_n(2) = 1 for every n
    for line in p_text.lines().skip(1) {
        let re: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((re - 1.0).abs() < 1e-14);
    }

    for method in ["recursive", "closed"] {
        let q = zetaop(&["coeff", "q", "--n", "3", "--s", "-1,0", "--method", method]);
        let q_text = stdout_str(&q);
        // q_1(−1) = 1/2
        let row1: Vec<&str> = q_text.lines().nth(2).unwrap().split(',').collect();
        let re: f64 = row1[1].parse().unwrap();
        assert!((re - 0.5).abs() < 1e-13, "{method}: {re}");
    }
}

#[test]
fn verify_passes_and_fails_by_tolerance() {
    let ok = zetaop(&["verify", "hurwitz-identity", "--grid", "default", "--tol", "1e-8"]);
    assert_eq!(ok.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&ok)).unwrap();
    assert_eq!(json["pass"], serde_json::Value::Bool(true));
    assert_eq!(json["rows"].as_array().unwrap().len(), 18);
    assert!(json["max_residual"].as_f64().unwrap() < 1e-8);

    // an impossible tolerance fails cleanly with exit 1, never a crash
    let fail = zetaop(&["verify", "trivial-zero-direct", "--tol", "1e-30"]);
    assert_eq!(fail.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&fail)).unwrap();
    assert_eq!(json["pass"], serde_json::Value::Bool(false));

    // unknown identity id reads as a usage error
    assert_eq!(zetaop(&["verify", "no-such-identity"]).status.code(), Some(2));
}

#[test]
fn verify_custom_grid() {
    let out = zetaop(&[
        "verify", "van-gorder-zeta", "--grid", "custom", "--s", "2,0", "--s", "-2,0", "--tol",
        "1e-9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn diagnose_emits_csv_then_json_verdict() {
    let out = zetaop(&["diagnose", "p-series", "--s", "2,0", "--terms", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,re_partial,im_partial,abs_term,ratio");
    assert_eq!(lines.len(), 103); // header + 101 rows + JSON verdict
    let json: serde_json::Value = serde_json::from_str(lines.last().unwrap()).unwrap();
    assert_eq!(json["verdict"], "diverging");
    // S_100 = 101 exactly
    let last_row: Vec<&str> = lines[101].split(',').collect();
    assert_eq!(last_row[0], "100");
    assert_eq!(last_row[1].parse::<f64>().unwrap(), 101.0);

    let taylor = zetaop(&[
        "diagnose", "taylor-shift", "--s", "3,0", "--a", "1", "--n", "1", "--terms", "60",
        "--tol", "1e-8",
    ]);
    assert_eq!(taylor.status.code(), Some(0));
    let text = stdout_str(&taylor);
    let json: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(json["verdict"], "converged");

    let ginv = zetaop(&["diagnose", "g-inverse", "--s", "-3,0", "--a", "1", "--terms", "20"]);
    assert_eq!(ginv.status.code(), Some(0));
    let text = stdout_str(&ginv);
    let json: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(json["verdict"], "converged");
    assert_eq!(json["certified"], serde_json::Value::Bool(true));
}

#[test]
fn characters_table_lists_group() {
    let out = zetaop(&["characters", "list", "--modulus", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(text.lines().next().unwrap(), "index,r,re,im");
    // φ(8) = 4 characters × 8 residues
    assert_eq!(text.lines().count(), 1 + 4 * 8);
    for line in text.lines().skip(1) {
        assert_eq!(line.split(',').count(), 4);
    }
}

#[test]
fn plot_writes_ppm_and_png() {
    let ppm = temp_path("fig1.ppm");
    let out = zetaop(&[
        "plot", "figure1", "--n", "1", "--resolution", "48x48", "--out",
        ppm.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let bytes = std::fs::read(&ppm).unwrap();
    assert!(bytes.starts_with(b"P6\n48 48\n255\n"));
    assert_eq!(bytes.len(), 13 + 48 * 48 * 3);
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(json["written"].as_str().unwrap().ends_with("fig1.ppm"));

    // determinism across runs and across an explicit worker cap
    let again = temp_path("fig1-again.ppm");
    let rerun = Command::new(env!("CARGO_BIN_EXE_zetaop"))
        .args(["plot", "figure1", "--n", "1", "--resolution", "48x48", "--out"])
        .arg(&again)
        .env("ZOL_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(rerun.status.code(), Some(0));
    assert_eq!(std::fs::read(&again).unwrap(), bytes);

    let png = temp_path("fig2.png");
    let out = zetaop(&[
        "plot", "figure2", "--n", "10", "--resolution", "32x32", "--out",
        png.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let png_bytes = std::fs::read(&png).unwrap();
    assert_eq!(&png_bytes[..8], &[0x89, b'P', b'N', b'G', b'\r', b'\n', 0x1a, b'\n']);
}

#[test]
fn plot_custom_region_and_errors() {
    let out_path = temp_path("custom.ppm");
    let out = zetaop(&[
        "plot", "custom", "--function", "difference", "--n", "5", "--region", "-10,10,-10,10",
        "--resolution", "40x40", "--circle", "1,0,5", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out_path.exists());

    // malformed region is a usage error
    let bad = zetaop(&[
        "plot", "custom", "--function", "difference", "--region", "1,2", "--out", "x.ppm",
    ]);
    assert_eq!(bad.status.code(), Some(2));

    // degenerate region is a numeric/domain error
    let degenerate = zetaop(&[
        "plot", "custom", "--function", "reference-pole", "--region", "2,2,-1,1", "--out",
        temp_path("never.ppm").to_str().unwrap(),
    ]);
    assert_eq!(degenerate.status.code(), Some(3));
}
