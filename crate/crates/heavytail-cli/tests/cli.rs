//! CLI surface tests: exit codes, error messages, and output shape.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heavytail"))
}

#[test]
fn sample_rejects_out_of_range_alpha() {
    let out = bin()
        .args(["sample", "--family", "linnik", "--alpha", "2.5", "--n", "10", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("(0, 2]"), "stderr: {err}");
}

#[test]
fn sample_writes_header_and_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let out = bin()
        .args([
            "sample", "--family", "linnik", "--alpha", "1.0", "--method", "normal_ml", "--n",
            "1000", "--seed", "7", "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "linnik(alpha=1,method=normal_ml)");
    assert_eq!(lines.count(), 1000);
}

#[test]
fn eval_produces_monotone_cdf_column() {
    let out = bin()
        .args([
            "eval", "--family", "mittag_leffler", "--delta", "0.5", "--function", "cdf",
            "--grid", "0:10:0.5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut prev = -1.0f64;
    for line in text.lines().skip(1) {
        let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(v >= prev);
        prev = v;
    }
    assert!(prev > 0.7);
}

#[test]
fn eval_reports_unsupported_pairs() {
    let out = bin()
        .args([
            "eval", "--family", "ratio_stable", "--alpha", "0.5", "--function", "cf", "--grid",
            "1:1:1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("ratio_stable"), "stderr: {err}");
}

#[test]
fn eval_cf_point_value() {
    let out = bin()
        .args([
            "eval", "--family", "linnik", "--alpha", "1.0", "--function", "cf", "--grid",
            "1:1:1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(",0.5"), "{text}");
}

#[test]
fn identity_unknown_id_exits_two_with_id_list() {
    let out = bin().args(["identity", "--id", "bogus", "--seed", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("weibull-power"), "stderr: {err}");
    assert!(err.contains("eq9"), "stderr: {err}");
}

#[test]
fn identity_single_id_passes_and_reports_json() {
    let out = bin()
        .args(["identity", "--id", "eq9", "--n", "20000", "--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rep: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(rep["passed"], serde_json::Value::Bool(true));
    assert!(rep["test_name"].as_str().unwrap().starts_with("weibull-power"));
}

#[test]
fn identity_accepts_descriptive_alias_with_params() {
    let out = bin()
        .args([
            "identity", "--id", "lemma6", "--delta", "0.4", "--delta-prime", "0.8", "--n",
            "20000", "--seed", "3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ml-scaling delta=0.4 delta_prime=0.8"), "{text}");
}

#[test]
fn randsum_missing_config_exits_two() {
    let out = bin().args(["randsum", "--config", "/nonexistent.cfg"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn randsum_reports_config_line_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "alpha = 1.0\nwat = 9\n").unwrap();
    let out = bin().args(["randsum", "--config"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
}
