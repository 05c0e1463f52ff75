use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn numrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numrad"))
        .args(args)
        .output()
        .expect("spawn numrad")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_matrix(dir: &TempDir, name: &str, rows: &[&[f64]]) -> PathBuf {
    let n = rows.len();
    let entries: Vec<Vec<[f64; 2]>> = rows.iter().map(|r| r.iter().map(|&x| [x, 0.0]).collect()).collect();
    let path = dir.path().join(name);
    fs::write(&path, serde_json::json!({ "n": n, "entries": entries }).to_string()).unwrap();
    path
}

fn schema_check(schema: &str, instance: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(schema);
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}");
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn compute_identity_radius() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(&dir, "i.json", &[&[1.0, 0.0], &[0.0, 1.0]]);
    let o = numrad(&["compute", "--input", p(&m), "--quantity", "w"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "1.00000000000\n");
}

#[test]
fn compute_quantities_of_jordan_block() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(&dir, "j.json", &[&[0.0, 1.0], &[0.0, 0.0]]);
    let value = |q: &str| -> f64 {
        let o = numrad(&["compute", "--input", p(&m), "--quantity", q]);
        assert!(o.status.success(), "{q}: {}", stderr(&o));
        stdout(&o).trim().parse().unwrap()
    };
    assert!((value("w") - 0.5).abs() <= 1e-11);
    assert_eq!(value("wmin"), 0.0);
    assert!((value("norm") - 1.0).abs() <= 1e-11);
    assert_eq!(value("ell"), 0.0);
    assert_eq!(value("r"), 0.0);
    assert!((value("range-area") - std::f64::consts::PI / 4.0).abs() <= 1e-5);
}

#[test]
fn input_errors_exit_two_with_one_line() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.json");
    let o = numrad(&["compute", "--input", p(&missing), "--quantity", "w"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("numrad: "));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"n": 2, "entries": [[[1, 0]]]}"#).unwrap();
    let o = numrad(&["compute", "--input", p(&bad), "--quantity", "w"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).lines().count(), 1);

    assert_eq!(numrad(&["compute", "--quantity", "w"]).status.code(), Some(2));
    assert_eq!(numrad(&["verify", "--ids", "NOPE"]).status.code(), Some(2));
    assert_eq!(numrad(&["verify", "--dims", "5..3"]).status.code(), Some(2));
    assert_eq!(numrad(&["verify", "--ensembles", "nope"]).status.code(), Some(2));
    assert_eq!(numrad(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn overflow_is_a_numeric_failure() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(&dir, "big.json", &[&[1e308, 1e308], &[1e308, 1e308]]);
    for q in ["w", "norm"] {
        let o = numrad(&["compute", "--input", p(&m), "--quantity", q]);
        assert_eq!(o.status.code(), Some(3), "{q}: {}", stdout(&o));
        assert_eq!(stderr(&o).lines().count(), 1);
    }
}

#[test]
fn range_of_jordan_block_is_a_circle() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(&dir, "j.json", &[&[0.0, 1.0], &[0.0, 0.0]]);
    let out = dir.path().join("range.csv");
    let o = numrad(&["range", "--input", p(&m), "--points", "512", "--out", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("theta,re,im"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 512);
    for r in rows {
        assert!((r[1].hypot(r[2]) - 0.5).abs() <= 1e-8);
    }
}

#[test]
fn verify_report_validates_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = numrad(&["verify", "--ids", "I1.1R,EQ2.23,KEY", "--trials", "10", "--seed", "1", "--out", p(&out)]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(stdout(&o).lines().count(), 3);
        fs::read(out).unwrap()
    };
    let first = run("a.json");
    assert_eq!(first, run("b.json"));
    let report: Value = serde_json::from_slice(&first).unwrap();
    schema_check("suite_report.schema.json", &report);
    assert_eq!(report["results"][1]["verdict"], "FINDING");
}

#[test]
fn verify_all_covers_every_id_once() {
    let o = numrad(&["verify", "--ids", "all", "--trials", "2", "--seed", "5"]);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    schema_check("suite_report.schema.json", &report);
    let ids: Vec<&str> = report["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    let listed = stdout(&numrad(&["list"]));
    let expected: Vec<&str> = listed.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(ids, expected);
}

#[test]
fn search_finds_scalar_counterexample() {
    let o = numrad(&["search", "--id", "EQ2.23", "--alpha", "0.5", "--ensemble", "psd", "--budget", "1000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let best: Value = serde_json::from_slice(&o.stdout).unwrap();
    schema_check("evaluation_report.schema.json", &best);
    assert_eq!(best["violated"], true);
    assert!(best["slack"].as_f64().unwrap() < 0.0);
}

#[test]
fn expand_validates() {
    let dir = TempDir::new().unwrap();
    let a = write_matrix(&dir, "a.json", &[&[0.0, 1.0], &[0.0, 0.0]]);
    let b = write_matrix(&dir, "b.json", &[&[0.0, 0.0], &[1.0, 0.0]]);
    let o = numrad(&["expand", "--a", p(&a), "--b", p(&b), "--n", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let exp: Value = serde_json::from_slice(&o.stdout).unwrap();
    schema_check("expansion.schema.json", &exp);
    assert_eq!(exp["terms"].as_array().unwrap().len(), 4);
    assert_eq!(numrad(&["expand", "--a", p(&a), "--b", p(&b), "--n", "99"]).status.code(), Some(2));
}

#[test]
fn matrix_schema_accepts_inputs() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(&dir, "m.json", &[&[1.0, 2.0], &[3.0, 4.0]]);
    let v: Value = serde_json::from_str(&fs::read_to_string(m).unwrap()).unwrap();
    schema_check("matrix.schema.json", &v);
}
