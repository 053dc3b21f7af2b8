use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

const COCAL: &str = env!("CARGO_BIN_EXE_cocal");

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(COCAL).args(args).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout).to_string();
    let value = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), value, String::from_utf8_lossy(&out.stderr).to_string())
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn matrix_file(dir: &Path, name: &str, rows: Vec<Vec<&str>>) -> PathBuf {
    write(dir, name, &json!({ "field": "rational", "rows": rows }))
}

fn diag(entries: [&'static str; 6]) -> Vec<Vec<&'static str>> {
    (0..6).map(|i| (0..6).map(|j| if i == j { entries[i] } else { "0" }).collect()).collect()
}

fn algebra(dir: &Path, name: &str, brackets: Value) -> PathBuf {
    let basis: Vec<String> = (1..=7).map(|i| format!("e{i}")).collect();
    write(dir, name, &json!({ "field": "rational", "dim": 7, "basis": basis, "brackets": brackets }))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decide_on_a_split_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let m = matrix_file(dir.path(), "m.json", diag(["1", "-1", "2", "-2", "3", "-3"]));
    let (code, r, err) = run(&["decide", "--matrix", s(&m)]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(r["decisions"]["g2"], true);
    assert_eq!(r["decisions"]["g2star"], true);
    assert_eq!(r["oracle"]["g2"], true);
    assert_eq!(r["exact"], true);
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn construct_for_a_negative_decision_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let m = matrix_file(dir.path(), "id.json", diag(["1"; 6]));
    let (code, r, _) = run(&["decide", "--matrix", s(&m)]);
    assert_eq!(code, 0);
    assert_eq!(r["decisions"]["g2"], false);
    assert_eq!(r["decisions"]["g2star"], false);
    let (code, _, _) = run(&["construct", "--kind", "G2", "--matrix", s(&m)]);
    assert_eq!(code, 5);
}

#[test]
fn construct_emits_a_verified_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let m = matrix_file(dir.path(), "m.json", diag(["1", "-1", "2", "-2", "3", "-3"]));
    let (code, out, err) = run(&["construct", "--kind", "G2STAR", "--matrix", s(&m)]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out["certificate"]["kind"], "G2STAR");
    assert_eq!(out["verification"]["signature"], json!([3, 4]));
    assert!(out["verification"]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn jacobi_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let g = algebra(
        dir.path(),
        "bad.json",
        json!([
            {"i": 1, "j": 2, "coeffs": [["e1", "1"]]},
            {"i": 1, "j": 3, "coeffs": [["e1", "1"]]},
            {"i": 2, "j": 3, "coeffs": [["e2", "1"]]}
        ]),
    );
    let (code, _, err) = run(&["decide", "--input", s(&g)]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn missing_ideal_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let g = algebra(
        dir.path(),
        "so3.json",
        json!([
            {"i": 1, "j": 2, "coeffs": [["e3", "1"]]},
            {"i": 2, "j": 3, "coeffs": [["e1", "1"]]},
            {"i": 1, "j": 3, "coeffs": [["e2", "-1"]]}
        ]),
    );
    let (code, _, err) = run(&["decide", "--input", s(&g)]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["decide"]).0, 1);
    assert_eq!(run(&["decide", "--matrix", "/nonexistent.json"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
}

#[test]
fn iso_compares_corpus_members() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(&["corpus", "--output", s(dir.path())]);
    assert_eq!(code, 0);
    let a = dir.path().join("nilpotent_2_2_2.json");
    let b = dir.path().join("nilpotent_6.json");
    let (code, r, _) = run(&["iso", "--input", s(&a), "--input", s(&a)]);
    assert_eq!(code, 0);
    assert_eq!(r["isomorphic"], true);
    let (_, r, _) = run(&["iso", "--input", s(&a), "--input", s(&b)]);
    assert_eq!(r["isomorphic"], false);
}

#[test]
fn oracle_reports_an_invariant_symplectic_form() {
    let dir = tempfile::tempdir().unwrap();
    let m = matrix_file(dir.path(), "m.json", diag(["1", "-1", "2", "-2", "0", "0"]));
    let (code, r, _) = run(&["oracle", "--matrix", s(&m)]);
    assert_eq!(code, 0);
    assert_eq!(r["oracle"]["g2"], true);
    assert!(!r["invariant_symplectic_form"].is_null());
}

#[test]
fn recognize_a_degenerate_form() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "phi.json",
        &json!({"dim": 7, "grade": 3, "variance": "form", "terms": [{"indices": [1, 2, 3], "coeff": "1"}]}),
    );
    let (code, r, err) = run(&["recognize", "--input", s(&f)]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(r["classification"], "NONE");
}

#[test]
fn text_output_and_fixture_selftest() {
    let dir = tempfile::tempdir().unwrap();
    let m = matrix_file(dir.path(), "m.json", diag(["0"; 6]));
    let out = Command::new(COCAL).args(["--format", "text", "decide", "--matrix", s(&m)]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("G2*"));
    let (code, r, _) = run(&["selftest", "--trials", "0"]);
    assert_eq!(code, 0);
    assert_eq!(r["passed"], true);
}
