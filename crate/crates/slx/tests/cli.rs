//! End-to-end runs of the `slx` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn slx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slx")).args(args).env("SLX_THREADS", "2").output().expect("spawn slx")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn spectrum_of_friedrichs_free() {
    let out = slx(&["spectrum", "--problem", &data("free.json"), "--param", "matrix:0,0,0,0", "--range", "0:20"]);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["convention"]["bracket_sign"], -1);
    let got: Vec<f64> = v["result"]["eigenvalues"].as_array().unwrap().iter().map(|e| e["lambda"].as_f64().unwrap()).collect();
    assert_eq!(got.len(), 4);
    for (g, n) in got.iter().zip(1..) {
        assert!((g - f64::from(n * n)).abs() < 1e-8, "{got:?}");
    }
}

#[test]
fn spectrum_csv_header() {
    let out = slx(&["spectrum", "--problem", "free", "--param", "L0", "--range", "-1:10", "--out", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,multiplicity,degenerate,residual,via"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn classify_legendre() {
    let v = json(&slx(&["classify", "--problem", &data("legendre.json")]));
    let r = &v["result"];
    assert_eq!(r["report"]["class_a"], "limit-circle-nonoscillatory");
    assert_eq!(r["report"]["class_b"], "limit-circle-nonoscillatory");
    assert!(r["K"].is_number());
    assert_eq!(r["valid"], true);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["spectrum", "--problem", "free"],
        vec!["spectrum", "--problem", "free", "--param", "matrix:1,2", "--range", "0:5"],
        vec!["spectrum", "--problem", "free", "--param", "L0", "--range", "5:1"],
        vec!["spectrum", "--problem", "/nonexistent.json", "--param", "L0", "--range", "0:5"],
        vec!["frobnicate"],
    ] {
        let out = slx(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn suite_single_check_passes() {
    let out = slx(&["suite", "--only", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn json_is_reproducible() {
    let args = ["weights", "--problem", "free", "--param", "vartheta:0.5,0,0,-1", "--range", "0:12"];
    let (a, b) = (slx(&args), slx(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn oracle_check_table() {
    let out = slx(&["oracle-check", "--problem", "free", "--param", "L0", "--range", "0:20"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.trim_end().ends_with("PASS")).count(), 6, "{text}");
    assert_eq!(text.lines().last(), Some("PASS"));
}

#[test]
fn line_scan_csv() {
    let out = slx(&["line-scan", "--problem", "free", "--theta-tilde", "0,0,0,0", "--theta", "1,0,0,1", "--lambda", "0.5:10", "--steps", "20"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("lambda,t_root_1,t_root_2,case,double_t\n"));
    assert_eq!(text.lines().count(), 21);
}
