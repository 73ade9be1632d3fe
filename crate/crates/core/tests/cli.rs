use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperplap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const TRIANGLE: &str =
    r#"{"n": 3, "hyperedges": [{"in":[1],"out":[2]},{"in":[2],"out":[3]},{"in":[3],"out":[1]}]}"#;

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn spectra_p2_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "t.json", TRIANGLE);
    let out = run(&["spectra", &file]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["all_hold"], Value::Bool(true));
    assert_eq!(v["input_sha256"].as_str().unwrap().len(), 64);
    let spectrum = v["results"]["spectrum"].as_array().unwrap();
    let values: Vec<f64> = spectrum.iter().map(|e| e["value"].as_f64().unwrap()).collect();
    for (got, want) in values.iter().zip([0.0, 1.5, 1.5]) {
        assert!((got - want).abs() < 1e-12, "{values:?}");
    }
}

#[test]
fn floats_carry_seventeen_digits() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "t.json", TRIANGLE);
    let out = run(&["spectra", &file, "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("e0") || text.contains("e-"), "{text}");
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!(v["results"]["lambda_min"].is_object());
}

#[test]
fn report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "t.json", TRIANGLE);
    let target = dir.path().join("report.json");
    let out = run(&["bounds", &file, "--suite", "cheeger", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["results"]["cheeger"]["value"].as_f64(), Some(1.0));
}

#[test]
fn nodal_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "t.json", TRIANGLE);
    let out = run(&["nodal", &file]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["pairs"].as_array().unwrap().len(), 3);
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let syntax = write(dir.path(), "a.json", "{\"n\": 2, \"hyperedges\": [");
    let out = run(&["spectra", &syntax]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let overlap = write(dir.path(), "b.json", r#"{"n": 2, "hyperedges": [{"in":[1,2],"out":[2]}]}"#);
    let out = run(&["spectra", &overlap]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hyperedges[0]"));

    let out = run(&["spectra", &syntax, "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["spectra", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn large_exhaustive_search_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let edges: Vec<String> = (1..30).map(|i| format!(r#"{{"in":[{i}],"out":[{}]}}"#, i + 1)).collect();
    let text = format!(r#"{{"n": 30, "hyperedges": [{}]}}"#, edges.join(","));
    let file = write(dir.path(), "path30.json", &text);
    let out = run(&["bounds", &file, "--suite", "cheeger"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["bounds", &file, "--suite", "cheeger", "--heuristic"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["results"]["cheeger"]["exact"], Value::Bool(false));
}

#[test]
fn candidate_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let k2 = write(dir.path(), "k2.json", r#"{"n": 2, "hyperedges": [{"in":[1],"out":[2]}]}"#);
    let good = write(dir.path(), "good.json", r#"{"value": 1, "function": [1, 0]}"#);
    let out = run(&["spectra", &k2, "--p", "1", "--candidate", &good]);
    assert_eq!(out.status.code(), Some(0));
    let bad = write(dir.path(), "bad.json", r#"{"value": 1, "function": [1, 1]}"#);
    let out = run(&["spectra", &k2, "--p", "1", "--candidate", &bad]);
    assert_eq!(out.status.code(), Some(1));
}
