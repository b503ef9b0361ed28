use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualcurve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Rows of a CSV table as name → column lookups.
fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(text: &str, name: &str) -> Vec<String> {
    let (h, rows) = table(text);
    let i = h.iter().position(|c| c == name).unwrap();
    rows.into_iter().map(|r| r[i].clone()).collect()
}

fn num(v: &str) -> f64 {
    v.parse().unwrap()
}

const EXEQ: &str = r#"{"kind": "analytic",
  "params": {"alpha": ["sin(s)", "-cos(s)"], "beta": ["cos(s)", "sin(s)"]},
  "domain": [0, 6.283185307179586]}"#;

#[test]
fn elliptic_family_table() {
    let o = run(&["family", "elliptic", "-p", "r=1", "-p", "c0=1", "-p", "c1=0", "--samples", "8", "--domain", "0,6.283"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("s,alpha_x,alpha_y,beta_x,beta_y,kappa_re,kappa_du\n"));
    assert_eq!(column(&out, "s").len(), 9);
    assert!(column(&out, "kappa_re").iter().all(|v| v == "1"));
    assert!(column(&out, "kappa_du").iter().all(|v| v == "0"));
    assert!(!out.contains('\r'));
}

#[test]
fn flat_family_has_no_dual_part() {
    let o = run(&["family", "flat", "--domain", "-1,1", "--samples", "4"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(column(&out, "beta_x").iter().chain(&column(&out, "beta_y")).all(|v| v == "0"));
}

#[test]
fn bad_family_input() {
    assert_eq!(code(&run(&["family", "elliptic", "-p", "r=-1", "--domain", "0,1"])), 2);
    assert_eq!(code(&run(&["family", "nope", "--domain", "0,1"])), 2);
    assert_eq!(code(&run(&["family", "flat", "--domain", "1"])), 2);
    assert_eq!(code(&run(&["family", "flat", "-p", "zeta=1", "--domain", "0,1"])), 2);
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("missing").join("t.csv");
    assert_eq!(code(&run(&["family", "flat", "--domain", "0,1", "--out", s(&out)])), 3);
}

#[test]
fn worked_example_invariants() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "exeq.json", EXEQ);
    let o = run(&["invariants", s(&spec), "--geometry", "equiaffine", "--samples", "20"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("s,alpha_x,alpha_y,beta_x,beta_y,kappa_re,kappa_du,nondeg,residual,causal\n"));
    for v in column(&out, "residual") {
        assert!(num(&v).abs() < 1e-12);
    }
    for v in column(&out, "kappa_re") {
        assert!((num(&v) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn analytic_needs_geometry() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "exeq.json", EXEQ);
    assert_eq!(code(&run(&["invariants", s(&spec)])), 2);
}

#[test]
fn lightlike_rows_have_empty_kappa() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "light.json",
        r#"{"kind": "lightlike", "params": {"v": [1, 1], "beta": ["s^2", "0"]}, "domain": [0, 1]}"#,
    );
    let o = run(&["invariants", s(&spec), "--samples", "4"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(column(&out, "causal").iter().all(|v| v == "lightlike"));
    assert!(column(&out, "kappa_re").iter().all(|v| v.is_empty()));
}

#[test]
fn malformed_and_missing_specs() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "bad.json", "{\"kind\": ");
    assert_eq!(code(&run(&["invariants", s(&spec)])), 2);
    let missing = dir.path().join("none.json");
    assert_eq!(code(&run(&["invariants", s(&missing)])), 3);
}

#[test]
fn non_admissible_everywhere_is_precondition_failure() {
    let dir = TempDir::new().unwrap();
    // Unit equiaffine speed in α, but the dual part breaks admissibility.
    let spec = write(
        &dir,
        "na.json",
        r#"{"kind": "analytic", "params": {"alpha": ["sin(s)", "-cos(s)"], "beta": ["s^3", "0"]}, "domain": [0.5, 1.5]}"#,
    );
    let o = run(&["invariants", s(&spec), "--geometry", "equiaffine", "--samples", "5"]);
    assert_eq!(code(&o), 4);
    let out = stdout(&o);
    assert!(column(&out, "kappa_re").iter().all(|v| v.is_empty()));
    assert!(column(&out, "residual").iter().all(|v| num(v).abs() > 1e-3));
}

#[test]
fn emitted_spec_round_trips() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("fam.json");
    let o = run(&[
        "family", "lorentz-const", "-p", "r=0.5", "-p", "m=3", "-p", "causal=timelike", "--domain", "-1,1",
        "--emit-spec", "--out", s(&spec),
    ]);
    assert_eq!(code(&o), 0);
    let direct = run(&["family", "lorentz-const", "-p", "r=0.5", "-p", "m=3", "-p", "causal=timelike", "--domain", "-1,1"]);
    let again = run(&["invariants", s(&spec)]);
    assert_eq!(code(&again), 0);
    let (a, b) = (stdout(&direct), stdout(&again));
    for c in ["s", "alpha_x", "beta_y", "kappa_re", "kappa_du"] {
        assert_eq!(column(&a, c), column(&b, c));
    }
    // 1/|r| + ε·m·sign(r)
    assert!(column(&b, "kappa_re").iter().all(|v| (num(v) - 2.0).abs() < 1e-9));
    assert!(column(&b, "kappa_du").iter().all(|v| (num(v) - 3.0).abs() < 1e-9));
}

#[test]
fn json_tables() {
    let o = run(&["family", "pure-dual", "-p", "m=2", "-p", "c0=1", "--domain", "0,1", "--samples", "2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1]["kappa_du"], 2.0);
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "lclass-dual-part", "--seed", "5"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["check"], "lclass-dual-part");
    assert!(r["maxError"].as_f64().unwrap() <= 1e-8);
    assert_eq!(code(&run(&["verify", "exeq-fd-oracle", "--tol", "0"])), 1);
    assert_eq!(code(&run(&["verify", "bogus-check"])), 2);
    assert_eq!(code(&run(&["verify"])), 2);
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "--all", "--seed", "0"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let list = run(&["verify", "--list"]);
    assert_eq!(v.as_array().unwrap().len(), stdout(&list).lines().count());
}

#[test]
fn identity_transform_keeps_table() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "exeq.json", EXEQ);
    let t = write(&dir, "id.json", r#"{"kind": "equiaffine", "matrix": [[1, 0], [0, 1]]}"#);
    let (before, after, out) = (dir.path().join("b.csv"), dir.path().join("a.csv"), dir.path().join("o.json"));
    let o = run(&["transform", s(&spec), s(&t), "--out", s(&out), "--before", s(&before), "--after", s(&after)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read(&before).unwrap(), fs::read(&after).unwrap());
    // The transformed document is itself a valid input.
    assert_eq!(code(&run(&["invariants", s(&out), "--samples", "3"])), 0);
}

#[test]
fn boost_keeps_curvature() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("l.json");
    let o = run(&[
        "family", "lorentz-const", "-p", "r=1", "-p", "m=2", "-p", "n=0.5", "-p", "beta0=0.1,0.2",
        "--domain", "-1,1", "--emit-spec", "--out", s(&spec),
    ]);
    assert_eq!(code(&o), 0);
    let t = write(&dir, "b.json", r#"{"kind": "lorentz", "boost": 1.0, "offset": [3, -1], "offset_dual": [0.5, 0]}"#);
    let (before, after) = (dir.path().join("b.csv"), dir.path().join("a.csv"));
    let o = run(&["transform", s(&spec), s(&t), "--before", s(&before), "--after", s(&after), "--samples", "20"]);
    assert_eq!(code(&o), 0);
    let (b, a) = (fs::read_to_string(&before).unwrap(), fs::read_to_string(&after).unwrap());
    for c in ["kappa_re", "kappa_du"] {
        for (x, y) in column(&b, c).iter().zip(column(&a, c)) {
            assert!((num(x) - num(&y)).abs() <= 1e-8, "{c}: {x} vs {y}");
        }
    }
    assert_eq!(column(&b, "causal"), column(&a, "causal"));
}

#[test]
fn non_group_transforms_rejected() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "exeq.json", EXEQ);
    let t = write(&dir, "det2.json", r#"{"kind": "equiaffine", "matrix": [[2, 0], [0, 1]]}"#);
    assert_eq!(code(&run(&["transform", s(&spec), s(&t)])), 2);
    let t = write(&dir, "iso.json", r#"{"kind": "lorentz", "matrix": [[1, 1], [0, 1]]}"#);
    assert_eq!(code(&run(&["transform", s(&spec), s(&t)])), 2);
}
