use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bas_cli::commands::{export_document, EXIT_FAIL, EXIT_INVALID, EXIT_OK};
use bas_cli::AlgebraDocument;
use bas_core::constructions::catalog;
use serde_json::Value;

fn bas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bas")).args(args).output().expect("binary runs")
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn export(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    let doc = export_document(name, &BTreeMap::new()).unwrap();
    std::fs::write(&path, doc.to_json()).unwrap();
    path
}

fn edited(dir: &Path, name: &str, f: impl FnOnce(&mut Value)) -> PathBuf {
    let mut v: Value = serde_json::from_str(&export_document(name, &BTreeMap::new()).unwrap().to_json()).unwrap();
    f(&mut v);
    let path = dir.join(format!("{name}_edited.json"));
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    path
}

#[test]
fn kodaira_passes_its_expectations() {
    let dir = tempfile::tempdir().unwrap();
    let p = export(dir.path(), "kodaira4");
    let out = bas(&["check", p.to_str().unwrap(), "--expect", "bas,pluriclosed"]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", text(&out.stderr));
    let s = text(&out.stdout);
    assert!(s.contains("bas: PASS"));
    assert!(s.contains("kahler: FAIL (witness (z, e, Je) = -1)"));
    assert!(s.contains("reduction: dim f = 2, dim base = 2, base flat Kahler"));
}

#[test]
fn jacobi_violation_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = edited(dir.path(), "kodaira4", |v| {
        v["brackets"].as_array_mut().unwrap().push(serde_json::json!({"x": "z", "y": "e", "value": {"e": "1"}}));
    });
    let out = bas(&["check", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_INVALID));
    assert!(text(&out.stderr).contains("Jacobi identity fails at (z, e, Je)"));
}

#[test]
fn complex_heisenberg_fails_bas_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = export(dir.path(), "h3C_natural");
    let out = bas(&["check", p.to_str().unwrap(), "--expect", "bas"]);
    assert_eq!(out.status.code(), Some(EXIT_FAIL));
    // four slots: the direction of differentiation, then the torsion form
    assert!(text(&out.stdout).contains("bas: FAIL (witness (x, ix, y, iy) = -2)"));
}

#[test]
fn unknown_check_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = export(dir.path(), "kodaira4");
    let out = bas(&["check", p.to_str().unwrap(), "--expect", "bogus"]);
    assert_eq!(out.status.code(), Some(EXIT_INVALID));
    assert!(text(&out.stderr).contains("unknown check \"bogus\""));
}

#[test]
fn non_integrable_structure() {
    let dir = tempfile::tempdir().unwrap();
    let p = edited(dir.path(), "kodaira4", |v| {
        v["J"] = serde_json::json!([["0", "0", "1", "0"], ["0", "0", "0", "1"], ["-1", "0", "0", "0"], ["0", "-1", "0", "0"]]);
    });
    let out = bas(&["check", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_FAIL));
    assert!(text(&out.stdout).contains("integrable: FAIL (witness"));
    assert!(text(&out.stderr).contains("Nijenhuis"));
}

#[test]
fn syntax_error_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\n  \"dim\": 2,\n  oops\n}").unwrap();
    let out = bas(&["check", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_INVALID));
    assert!(text(&out.stderr).contains("line 3"));
}

#[test]
fn documents_round_trip() {
    for name in catalog::list() {
        let doc = export_document(name, &BTreeMap::new()).unwrap();
        let json = doc.to_json();
        let back = AlgebraDocument::from_json(&json).unwrap();
        assert_eq!(back.to_json(), json, "{name}");
        let (a, b) = (doc.parse().unwrap(), back.parse().unwrap());
        assert_eq!(a.metric, b.metric, "{name}");
        assert_eq!(a.j, b.j, "{name}");
        assert_eq!(a.carrier.names(), b.carrier.names(), "{name}");
    }
}

#[test]
fn json_report_and_report_file_agree() {
    let dir = tempfile::tempdir().unwrap();
    let p = export(dir.path(), "sl2c_canonical");
    let r = dir.path().join("report.json");
    let out = bas(&["check", p.to_str().unwrap(), "--json", "--report", r.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(text(&out.stdout), std::fs::read_to_string(&r).unwrap());
    let v: Value = serde_json::from_str(&text(&out.stdout)).unwrap();
    assert_eq!(v["verdicts"]["bas"]["pass"], Value::Bool(true));
    assert!(v.get("timings").is_none());
    let timed = bas(&["check", p.to_str().unwrap(), "--json", "--timings"]);
    let v: Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(v["timings"].is_object());
}

#[test]
fn catalog_verify_all() {
    let out = bas(&["catalog", "verify", "--all"]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", text(&out.stdout));
    let s = text(&out.stdout);
    assert_eq!(s.lines().count(), catalog::list().len());
    assert!(s.lines().all(|l| l.ends_with(": PASS")));
}

#[test]
fn catalog_parameters() {
    let out = bas(&["catalog", "verify", "calabi_eckmann", "--param", "p=4", "--param", "r=9"]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}{}", text(&out.stdout), text(&out.stderr));
    let out = bas(&["catalog", "verify", "no_such_entry"]);
    assert_eq!(out.status.code(), Some(EXIT_INVALID));
}

#[test]
fn present_and_reduce() {
    let dir = tempfile::tempdir().unwrap();
    let p = export(dir.path(), "kodaira4");
    let out = bas(&["present", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((v["dim_l"].as_u64(), v["dim_u"].as_u64(), v["dim_f"].as_u64()), (Some(5), Some(1), Some(2)));
    let out = bas(&["reduce", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["base_flat_kahler"], Value::Bool(true));
    // the presentation document is itself a valid input
    let doc = dir.path().join("presentation.json");
    let pres: Value = serde_json::from_slice(&bas(&["present", p.to_str().unwrap()]).stdout).unwrap();
    std::fs::write(&doc, serde_json::to_string(&pres["presentation"]).unwrap()).unwrap();
    let out = bas(&["check", doc.to_str().unwrap(), "--expect", "bas"]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}{}", text(&out.stdout), text(&out.stderr));
}

#[test]
fn reduction_refused_on_bismut_flat_groups() {
    let dir = tempfile::tempdir().unwrap();
    let p = export(dir.path(), "calabi_eckmann");
    let out = bas(&["check", p.to_str().unwrap(), "--expect", "bas,pluriclosed"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(text(&out.stdout).contains("note: "));
    let out = bas(&["reduce", p.to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(EXIT_OK));
}

#[test]
fn classify_nil_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let yes = bas(&["classify-nil", export(dir.path(), "r1_h7").to_str().unwrap()]);
    assert_eq!(yes.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_slice(&yes.stdout).unwrap();
    assert_eq!(v["verdict"], "yes");
    assert_eq!(v["standard_structure_bas"], Value::Bool(true));
    let no = bas(&["classify-nil", export(dir.path(), "h3C_natural").to_str().unwrap()]);
    assert_eq!(no.status.code(), Some(EXIT_FAIL));
    let v: Value = serde_json::from_slice(&no.stdout).unwrap();
    assert_eq!(v["obstruction"]["min_poly"], "t^2 + 1");
}
