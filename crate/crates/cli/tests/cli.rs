use std::process::Command;

use serde_json::Value;
use spectrunc_cli::{run, OUTPUT_DIR_ENV};

/// Runs in-process, returning (exit code, stdout, stderr).
fn call(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["spectrunc"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name || h.starts_with(&format!("{name}["))).unwrap()
}

#[test]
fn kernel_row_has_unit_mass() {
    let (code, out, _) = call(&["kernel", "--dim", "1", "--lambda-sq", "16/1", "--delta", "0.5"]);
    assert_eq!(code, 0);
    let (header, rows) = csv(&out);
    assert_eq!(rows.len(), 1);
    assert!(header.contains(&"total_mass[tol=1e-10]".to_string()));
    let mass: f64 = rows[0][column(&header, "total_mass")].parse().unwrap();
    assert!((mass - 1.0).abs() < 1e-10);
    assert_eq!(rows[0][column(&header, "lambda_sq")], "16/1");
}

#[test]
fn numeric_columns_are_tagged() {
    for args in [
        vec!["kernel", "--dim", "2", "--lambda-sq", "5"],
        vec!["lattice", "--dim", "2", "--lambda-sq", "2"],
        vec!["symbol", "--dim", "1", "--half-width", "2"],
        vec!["defect", "--dim", "1", "--lambda-sq", "4", "--samples", "2"],
        vec!["distance", "--dim", "1", "--lambda-sq", "1", "--x", "0", "--y", "1"],
    ] {
        let (code, out, err) = call(&args);
        assert_eq!(code, 0, "{args:?}: {err}");
        let (header, _) = csv(&out);
        for h in header.iter().filter(|h| !matches!(h.as_str(), "truncation" | "object" | "converged")) {
            assert!(h.ends_with(']'), "{args:?}: untagged column {h}");
        }
    }
}

#[test]
fn propagation_certificate_contains_worked_example() {
    let (code, out, _) = call(&["propagation", "--dim", "2", "--lambda-sq", "2/1"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["propagation_number"], 2);
    assert_eq!(doc["span_rank"], 81);
    assert_eq!(doc["holds"], true);
    let dec = doc["decompositions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|d| d["target"] == serde_json::json!([[0, 0], [1, 0]]))
        .unwrap();
    let expect = serde_json::json!([
        {"coeff": 1, "left": [-1, -1], "right": [2, 1]},
        {"coeff": -1, "left": [-1, -2], "right": [2, 2]},
    ]);
    assert_eq!(dec["terms"], expect);
}

#[test]
fn sweep_reports_brackets() {
    let (code, out, err) = call(&["sweep", "--dim", "1", "--lambdas", "4,8,16", "--x", "0", "--y", "1.0"]);
    assert_eq!(code, 0, "{err}");
    let (header, rows) = csv(&out);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][column(&header, "lambda_sq")], "16/1");
    assert_eq!(rows[2][column(&header, "lambda_sq")], "256/1");
    let (lo, up, ok) = (column(&header, "lower"), column(&header, "upper"), column(&header, "bracket_ok"));
    let mut prev = 0.0;
    for r in &rows {
        let (l, u): (f64, f64) = (r[lo].parse().unwrap(), r[up].parse().unwrap());
        assert!(l <= u && u <= 1.0 + 1e-6 && l > prev);
        assert_eq!(r[ok], "true");
        prev = l;
    }
}

#[test]
fn lattice_and_symbol_outputs() {
    let (_, out, _) = call(&["lattice", "--dim", "1", "--lambda-sq", "4", "--format", "json"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["points"], serde_json::json!([[-2], [-1], [0], [1], [2]]));
    assert_eq!(doc["schema_version"], 1);
    let (_, out, _) = call(&["lattice", "--dim", "2", "--lambda-sq", "9", "--set", "hull", "--format", "json"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert!(doc["points"].as_array().unwrap().contains(&serde_json::json!([2, 2])));
    let (_, out, _) = call(&["lattice", "--dim", "1", "--lambda-sq", "1", "--set", "lense", "--shift", "-1"]);
    let (_, rows) = csv(&out);
    assert_eq!(rows, vec![vec!["-1".to_string(), "1".into()], vec!["0".into(), "0".into()]]);
    let (_, out, _) = call(&["symbol", "--dim", "1", "--lambda-sq", "1", "--format", "json"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["values"], serde_json::json!(["1/3", "2/3", "1/1", "2/3", "1/3"]));
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        vec!["kernel", "--dim", "1", "--lambda-sq", "abc"],
        vec!["kernel", "--dim", "1", "--lambda-sq", "-4"],
        vec!["kernel", "--dim", "1", "--lambda-sq", "4", "--half-width", "2"],
        vec!["kernel", "--dim", "1", "--lambda-sq", "4", "--delta", "7"],
        vec!["kernel", "--dim", "0", "--lambda-sq", "4"],
        vec!["distance", "--dim", "2", "--lambda-sq", "2", "--x", "0", "--y", "1,0"],
        vec!["propagation", "--dim", "2", "--lambda-sq", "100"],
        vec!["kernel", "--dim", "1", "--lambda-sq", "4", "--bogus"],
        vec!["frobnicate"],
    ] {
        let (code, out, err) = call(&args);
        assert_eq!(code, 1, "{args:?}");
        assert!(out.is_empty() && !err.is_empty(), "{args:?}");
    }
    let (_, _, err) = call(&["kernel", "--bogus"]);
    assert!(err.contains("Usage"));
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("propagation"));
}

#[test]
fn binary_output_is_byte_identical_under_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_spectrunc");
    let args = ["defect", "--dim", "2", "--lambda-sq", "4", "--samples", "4", "--seed", "11"];
    for name in ["a.csv", "b.csv"] {
        let status = Command::new(bin)
            .args(args)
            .args(["--output", &format!("nested/{name}")])
            .env(OUTPUT_DIR_ENV, dir.path())
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(dir.path().join("nested/a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("nested/b.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let other = Command::new(bin).args(["defect", "--dim", "2", "--lambda-sq", "4", "--samples", "4", "--seed", "12"]).output().unwrap();
    assert_ne!(other.stdout, a);
}

#[test]
fn binary_reports_usage_on_unknown_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_spectrunc")).args(["sweep", "--nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}
