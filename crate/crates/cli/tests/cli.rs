use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn conelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report on stdout")
}

fn write_doc(dir: &Path, name: &str, t: &str) -> String {
    let path = dir.join(name).display().to_string();
    let o = conelab(&[
        "construct", "--alpha", "1.5707963", "--beta", "1.5707963", "--t", t, "--out", &path,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn construct_writes_family_lengths() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "g.json", "1.0471976");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let l1 = doc["lengths"]["l1"].as_f64().unwrap();
    assert!((l1 - 2.0943951).abs() < 1e-7);
    assert_eq!(doc["lengths"]["l1"], doc["lengths"]["l2"]);
}

#[test]
fn construct_rejects_out_of_range() {
    assert_eq!(code(&conelab(&["construct", "--t", "0"])), 2);
    assert_eq!(code(&conelab(&["construct", "--alpha", "3.5"])), 2);
    assert_eq!(code(&conelab(&["construct", "--bogus"])), 2);
}

#[test]
fn construct_then_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "g.json", "1.0471976");
    let o = conelab(&["check", &path]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["pass"], true);
    let theta = &r["result"]["cone_angles"];
    let a = 1.5707963;
    assert!((theta["theta_a"].as_f64().unwrap() - a).abs() < 1e-10);
    assert!((theta["theta_d"].as_f64().unwrap() - 2.0 * a).abs() < 1e-10);
    assert!((theta["theta_c"].as_f64().unwrap() - 4.0 * std::f64::consts::PI).abs() < 1e-10);
}

#[test]
fn corrupted_length_fails_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "g.json", "1.0471976");
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["lengths"]["l5"] = Value::from(3.0);
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = conelab(&["check", &path]);
    assert_eq!(code(&o), 1);
    let r = report(&o);
    assert_eq!(r["pass"], false);
    assert!(!r["result"]["validity"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn unreadable_documents() {
    assert_eq!(code(&conelab(&["check", "/definitely/missing.json"])), 3);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(code(&conelab(&["check", path.to_str().unwrap()])), 3);
}

#[test]
fn rigidity_defaults_pass() {
    let o = conelab(&["rigidity", "--samples", "60"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["result"]["rigid"], true);
    assert_eq!(r["config"]["samples"], 60);
}

#[test]
fn rigidity_seed_changes_details_not_verdict() {
    let a = report(&conelab(&["rigidity", "--samples", "20", "--seed", "1"]));
    let b = report(&conelab(&["rigidity", "--samples", "20", "--seed", "2"]));
    assert_eq!(a["result"]["rigid"], b["result"]["rigid"]);
    assert_ne!(a["result"]["solutions"], b["result"]["solutions"]);
}

#[test]
fn rigidity_radius_too_large_names_limit() {
    let o = conelab(&["rigidity", "--t", "0.05", "--radius", "0.2"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("0.0097"), "{err}");
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"samples": 25, "seed": 11, "workers": 3}"#).unwrap();
    let run = || conelab(&["rigidity", "--config", cfg.to_str().unwrap()]).stdout;
    let first = run();
    assert!(!first.is_empty());
    assert_eq!(first, run());
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["config"]["workers"], 3);
    assert_eq!(v["version"], "conelab 0.1.0");
}

#[test]
fn bad_config_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"sample": 3}"#).unwrap();
    assert_eq!(code(&conelab(&["eigen", "--config", cfg.to_str().unwrap()])), 3);
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = conelab(&["scan", "--grid", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("l1,l2,l3,l4,l5,l6,rA,rB,rD,rC,feasible"));
    assert_eq!(lines.count(), 16);
}

#[test]
fn scan_dsplit_closure() {
    let o = conelab(&["scan", "--closure", "dsplit", "--eps", "0.01", "--grid", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 10);
}

#[test]
fn lemma1_suite_passes() {
    let o = conelab(&["lemmas", "--suite", "lemma1"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["result"]["lemma1"]["reports"].as_array().unwrap().len(), 4);
}

#[test]
fn lemma3_locations_hold_but_labels_are_swapped() {
    let o = conelab(&["lemmas", "--suite", "lemma3", "--ell", "1.0471976", "--beta-angle", "1.5707963"]);
    let r = report(&o);
    let l3 = &r["result"]["lemma3"];
    assert_eq!(l3["locations_ok"], true);
    let first = &l3["sweep"]["extrema"][0];
    assert!((first["alpha_crit"].as_f64().unwrap() - 0.955317).abs() < 1e-6);
    assert_eq!(first["kind"], "maximum");
    assert_eq!(l3["classification_ok"], false);
    assert_eq!(code(&o), 1);
}

#[test]
fn lemma3_degenerate_case_passes() {
    let o = conelab(&["lemmas", "--suite", "lemma3", "--ell", "1.0471976", "--beta-angle", "1.0471976"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["result"]["lemma3"]["sweep"]["extrema"][0]["kind"], "degenerate");
}

#[test]
fn lemma2_single_node_reports_sign() {
    let o = conelab(&["lemmas", "--suite", "lemma2", "--ell", "2.0943951", "--beta-angle", "1.5707963"]);
    let r = report(&o);
    let sweeps = r["result"]["lemma2"]["sweeps"].as_array().unwrap();
    assert_eq!(sweeps.len(), 3);
    for s in sweeps {
        assert_eq!(s["regime"], "below");
        assert_eq!(s["single_strict_sign"], true);
    }
    assert_eq!(code(&o), 1);
}

#[test]
fn eigen_default_passes() {
    let o = conelab(&["eigen", "--n", "1001", "--delta", "0.1"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert!(r["result"]["radial_residual"].as_f64().unwrap() < 1e-4);
    assert_eq!(r["result"]["slit"]["max_mismatch"], 0.0);
}

#[test]
fn eigen_rejects_bad_grid() {
    assert_eq!(code(&conelab(&["eigen", "--n", "2"])), 2);
    assert_eq!(code(&conelab(&["eigen", "--delta", "2.0"])), 2);
}

#[test]
fn admissible_on_boundary() {
    let o = conelab(&["admissible", "--alpha", "1.5707963", "--beta", "1.5707963"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert!((r["result"]["mp_distance"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((r["result"]["chi"].as_f64().unwrap() - 1.0).abs() < 1e-7);
}
