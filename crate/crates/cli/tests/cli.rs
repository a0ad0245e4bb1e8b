use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn pathring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathring")).args(args).output().expect("binary runs")
}

fn rows(out: &Output) -> BTreeMap<String, String> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .filter_map(|l| l.split_once('\t'))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn value(rows: &BTreeMap<String, String>, key: &str) -> f64 {
    rows.get(key).unwrap_or_else(|| panic!("missing {key}")).parse().unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("pathring-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn formal_verify_passes() {
    let out = pathring(&["verify", &fixture("formal_m2.json"), "--truncation", "3", "--format", "rows"]);
    assert_eq!(out.status.code(), Some(0));
    let r = rows(&out);
    assert!(r.values().all(|v| v != "FAIL"));
    assert_eq!(r["connectedness"], "PASS");
}

#[test]
fn sphere_fails_concentration() {
    let out = pathring(&["verify", &fixture("sphere.json"), "--truncation", "4", "--format", "rows"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(rows(&out).values().any(|v| v == "FAIL"));
}

#[test]
fn two_idempotents_are_disconnected() {
    let out = pathring(&["verify", &fixture("two_idempotent.json"), "--format", "rows"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(rows(&out)["connectedness"], "FAIL");
}

#[test]
fn malformed_document_exits_two() {
    let bad = scratch("bad.json", "{");
    assert_eq!(pathring(&["bar", &bad]).status.code(), Some(2));
    assert_eq!(pathring(&["transport", &bad]).status.code(), Some(2));
    assert_eq!(pathring(&["bar", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(pathring(&["bar"]).status.code(), Some(2));
}

#[test]
fn invalid_cdga_exits_three() {
    let bad = scratch("inhomogeneous.json", r#"{"degrees": {"0": ["1", "t"]}, "unit": "1", "d": [["t", [["t", "1"]]]]}"#);
    let out = pathring(&["bar", &bad]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("pathring: "));
}

#[test]
fn basis_cap_exits_four() {
    let out = pathring(&["bar", &fixture("formal_m3.json"), "--basis-cap", "5"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn path_through_puncture_exits_five() {
    assert_eq!(pathring(&["transport", &fixture("through_puncture.json")]).status.code(), Some(5));
}

#[test]
fn unreachable_tolerance_exits_six() {
    assert_eq!(pathring(&["transport", &fixture("log.json"), "--tol", "1e-30"]).status.code(), Some(6));
}

#[test]
fn unsupported_precision_exits_two() {
    assert_eq!(pathring(&["transport", &fixture("log.json"), "--precision-bits", "200"]).status.code(), Some(2));
}

#[test]
fn log_transport_matches_closed_form() {
    let out = pathring(&["transport", &fixture("log.json"), "--format", "rows"]);
    assert_eq!(out.status.code(), Some(0));
    let r = rows(&out);
    assert!((value(&r, "I[0].re") - 2.5f64.ln()).abs() < 1e-10);
    assert!(value(&r, "I[0].im").abs() < 1e-10);
}

#[test]
fn double_double_log() {
    let out = pathring(&["transport", &fixture("log.json"), "--precision-bits", "106", "--tol", "1e-18", "--format", "rows"]);
    assert_eq!(out.status.code(), Some(0));
    let r = rows(&out);
    let text = &r["I[0].re"];
    assert!(text.starts_with("9.16290731874155065183"), "{text}");
}

#[test]
fn polylog_pairings() {
    let out = pathring(&["pair", &fixture("polylog.json"), "--format", "rows"]);
    assert_eq!(out.status.code(), Some(0));
    let r = rows(&out);
    let (l0, l1) = (2.5f64.ln(), (0.5f64 / 0.8).ln());
    assert!((value(&r, "pair.sum_of_logs.re") - (l0 + l1)).abs() < 1e-10);
    assert!((value(&r, "pair.shuffle.re") - l0 * l1).abs() < 1e-10);
}

#[test]
fn polylog_transport_agrees_with_ode() {
    let out = pathring(&["transport", &fixture("polylog.json"), "--format", "rows"]);
    assert_eq!(out.status.code(), Some(0));
    let r = rows(&out);
    assert_eq!(r["transport.ode_agreement"], "PASS");
    assert!((value(&r, "T.0.2.re") - value(&r, "I[0,1].re")).abs() < 1e-12);
}

#[test]
fn trivial_model_is_rationals() {
    let out = pathring(&["model", &fixture("formal_m0.json"), "--stages", "2", "--format", "rows"]);
    assert_eq!(out.status.code(), Some(0));
    let r = rows(&out);
    assert_eq!(r["L2.dim.0"], "1");
    assert_eq!(r["L2.dim.1"], "0");
    assert_eq!(r["L2.H^0_is_Q"], "PASS");
    assert_eq!(r["augmentation_count"], "1");
}

#[test]
fn out_flag_writes_file() {
    let target = scratch("hopf.tsv", "");
    let out = pathring(&["hopf", "--letters", "1", "--truncation", "2", "--format", "rows", "--out", &target]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&target).unwrap();
    assert!(written.lines().all(|l| l.contains('\t')));
    assert!(!written.is_empty());
}

#[test]
fn text_format_aligns_columns() {
    let out = pathring(&["bar", &fixture("formal_m1.json"), "--truncation", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\t'));
}
