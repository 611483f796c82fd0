use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    report: Value,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_semiclass"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        report: serde_json::from_slice(&out.stdout).unwrap_or(Value::Null),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn spec(dir: &TempDir, name: &str, body: &str) -> String {
    let path: PathBuf = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn hermite_recurrence() {
    let dir = TempDir::new().unwrap();
    let h = spec(&dir, "h.json", r#"{"type":"hermite"}"#);
    let r = run(&["recurrence", "--u", &h, "--nmax", "5"]);
    assert_eq!(r.code, 0);
    assert_eq!(strings(&r.report["gamma"]), ["1/2", "1/1", "3/2", "2/1", "5/2"]);
    assert_eq!(r.report["backend"], "exact");
}

#[test]
fn laguerre_recurrence() {
    let dir = TempDir::new().unwrap();
    let l = spec(&dir, "l.json", r#"{"type":"laguerre","alpha":"0"}"#);
    let r = run(&["recurrence", "--u", &l, "--nmax", "3"]);
    assert_eq!(r.code, 0);
    assert_eq!(strings(&r.report["beta"])[..3], ["1/1", "3/1", "5/1"]);
    assert_eq!(strings(&r.report["gamma"])[..2], ["1/1", "4/1"]);
}

#[test]
fn singular_moments_exit_2() {
    let dir = TempDir::new().unwrap();
    let s = spec(&dir, "s.json", r#"{"type":"moments","values":["1","1","1","1","1","1"]}"#);
    let r = run(&["recurrence", "--u", &s, "--nmax", "2"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.report["status"], "error");
}

#[test]
fn short_moment_list_exit_4() {
    let dir = TempDir::new().unwrap();
    let s = spec(&dir, "s.json", r#"{"type":"moments","values":["1","0","1/2"]}"#);
    assert_eq!(run(&["recurrence", "--u", &s, "--nmax", "3"]).code, 4);
    let h = spec(&dir, "h.json", r#"{"type":"hermite"}"#);
    let r = run(&[
        "coherence-check", "--u", &h, "--pi", "0,1", "--M", "1", "--m", "1", "--k", "0", "--degree", "7", "--nmax", "6",
    ]);
    assert_eq!(r.code, 4, "{}", r.stderr);
}

#[test]
fn coherence_verdicts() {
    let dir = TempDir::new().unwrap();
    let h = spec(&dir, "h.json", r#"{"type":"hermite"}"#);
    let l = spec(&dir, "l.json", r#"{"type":"laguerre","alpha":0}"#);
    let holds = run(&["coherence-check", "--u", &h, "--v", &h, "--pi", "0,1", "--M", "1", "--N", "1", "--m", "1", "--k", "0"]);
    assert_eq!(holds.code, 0);
    assert_eq!(holds.report["verdict"]["verdict"], "holds");
    assert_eq!(holds.report["minimal"]["M"], 1);

    let appell = run(&["coherence-check", "--u", &h, "--pi", "1", "--M", "0", "--N", "0", "--m", "1", "--k", "0"]);
    assert_eq!(appell.code, 0);

    let mixed = run(&["coherence-check", "--u", &h, "--v", &l, "--pi", "1", "--M", "0", "--m", "1", "--k", "0"]);
    assert_eq!(mixed.code, 3);
    assert_eq!(mixed.report["verdict"]["verdict"], "violated");
}

#[test]
fn non_monic_pi_is_normalized_with_warning() {
    let dir = TempDir::new().unwrap();
    let h = spec(&dir, "h.json", r#"{"type":"hermite"}"#);
    let r = run(&["coherence-check", "--u", &h, "--pi", "0,2", "--M", "1", "--m", "1", "--k", "0"]);
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("not monic"));
    assert_eq!(r.report["pair"]["pi"], "x");
}

#[test]
fn semiclassical_certificates() {
    let dir = TempDir::new().unwrap();
    let h = spec(&dir, "h.json", r#"{"type":"hermite"}"#);
    let r = run(&["semiclassical", "--u", &h, "--pi", "1", "--M", "0", "--m", "1", "--k", "0", "--nmax", "4"]);
    assert_eq!(r.code, 0);
    let first = &r.report["certificates"][0];
    assert_eq!((first["phi"].as_str(), first["psi"].as_str()), (Some("1"), Some("-2x")));
    assert_eq!(first["class_bound"], 0);

    let r = run(&["semiclassical", "--u", &h, "--pi", "0,1", "--M", "1", "--m", "1", "--k", "0", "--nmax", "6"]);
    assert_eq!(r.code, 0);
    let first = &r.report["certificates"][0];
    assert_eq!((first["phi"].as_str(), first["psi"].as_str()), (Some("x"), Some("-2x^2 + 1")));
    assert_eq!(first["class_bound"], 1);
}

#[test]
fn degenerate_determinant_exit_5() {
    let dir = TempDir::new().unwrap();
    let u = spec(&dir, "u.json", r#"{"type":"laguerre","alpha":"5/2"}"#);
    let v = spec(&dir, "v.json", r#"{"type":"laguerre","alpha":"1/2"}"#);
    let r = run(&["semiclassical", "--u", &u, "--v", &v, "--pi", "0,1", "--M", "0", "--m", "0", "--k", "1", "--nmax", "4"]);
    assert_eq!(r.code, 5, "{}", r.stderr);
    assert_eq!(r.report["hypothesis_failed"], true);
}

#[test]
fn incoherent_pair_exit_3_for_semiclassical() {
    let dir = TempDir::new().unwrap();
    let h = spec(&dir, "h.json", r#"{"type":"hermite"}"#);
    let l = spec(&dir, "l.json", r#"{"type":"laguerre","alpha":"0"}"#);
    let r = run(&["semiclassical", "--u", &h, "--v", &l, "--pi", "1", "--M", "0", "--m", "1", "--k", "0"]);
    assert_eq!(r.code, 3);
}

#[test]
fn griffin_hermite_case() {
    let r = run(&["griffin", "--r0", "0", "--r1", "0", "--s1", "1/2", "--s2", "1", "--nmax", "6"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let p = &r.report["params"];
    assert_eq!(p["equation"]["a"], "1/1");
    assert_eq!(p["equation"]["c"], "0/1");
    assert_eq!(p["t_exact"], "0/1");
    assert!(p["M"].as_str().unwrap().starts_with("1.0000000000000000000"));
    assert_eq!(r.report["precision_bits"], 128);
    assert_eq!(r.report["recurrence_comparison"]["displayed_first_divergence"], 3);
}

#[test]
fn griffin_gate_and_backend() {
    let r = run(&["griffin", "--r0", "0", "--r1", "0", "--s1", "-1", "--s2", "1"]);
    assert_eq!(r.code, 6);
    let r = run(&["griffin", "--r0", "1", "--r1", "1", "--s1", "1/2", "--s2", "1/4"]);
    assert_eq!(r.code, 6);
    let r = run(&["griffin", "--backend", "exact", "--r0", "0", "--r1", "0", "--s1", "1/2", "--s2", "1"]);
    assert_eq!(r.code, 1);
}

#[test]
fn griffin_asymmetric_pins_structure() {
    let r = run(&["griffin", "--r0", "1/4", "--r1", "0", "--s1", "1/2", "--s2", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = r.report["structure"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    let s10: f64 = rows[10]["s"].as_str().unwrap().parse().unwrap();
    assert!((s10 - 4.511_148_000_176_55).abs() < 1e-12);
}

#[test]
fn moments_of_weight_spec() {
    let dir = TempDir::new().unwrap();
    let g = spec(&dir, "g.json", r#"{"type":"griffin","M":"1","t":"0","c":"0"}"#);
    let r = run(&["moments", "--backend", "float", "--u", &g, "--nmax", "4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let m: Vec<f64> = strings(&r.report["moments"]).iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(m.len(), 5);
    for (got, want) in m.iter().zip([1.0, 0.0, 0.5, 0.0, 0.75]) {
        assert!((got - want).abs() < 1e-15);
    }
    assert_eq!(run(&["moments", "--u", &g]).code, 1);
}

#[test]
fn out_file_and_table() {
    let dir = TempDir::new().unwrap();
    let h = spec(&dir, "h.json", r#"{"type":"hermite"}"#);
    let out = dir.path().join("report.json");
    let r = run(&["recurrence", "--u", &h, "--nmax", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(saved["command"], "recurrence");

    let table = Command::new(env!("CARGO_BIN_EXE_semiclass"))
        .args(["recurrence", "--u", &h, "--nmax", "2", "--format", "table"])
        .output()
        .unwrap();
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.contains("gamma: [1/2, 1/1]"));
}
