use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_proper-eff"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("proper-eff-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str], file: &PathBuf) -> Output {
    let mut cmd = bin();
    cmd.arg(args[0]).arg(file).args(&args[1..]);
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn verdict<'a>(report: &'a Value, notion: &str) -> &'a Value {
    report["verdicts"].as_array().unwrap().iter().find(|v| v["notion"] == notion).unwrap()
}

#[test]
fn golden_approx_instance() {
    let report = json(&run(&["classify"], &data("approx_golden.json")));
    let be = verdict(&report, "BeApprox");
    assert_eq!(be["status"], "no");
    assert_eq!(be["counterexample"], serde_json::json!([-1, -1]));
    let amin = verdict(&report, "AMin");
    assert_eq!(amin["status"], "yes");
    let lambda = amin["certificate"]["lambda"].as_f64().unwrap();
    assert!((lambda - 1.0 / 3.0).abs() < 1e-9, "{lambda}");
}

#[test]
fn orthant_instance_is_efficient_in_every_sense() {
    let report = json(&run(&["classify"], &data("orthant.json")));
    let verdicts = report["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 10);
    for v in verdicts {
        assert_eq!(v["status"], "yes", "{}", v["notion"]);
    }
}

#[test]
fn classify_is_byte_deterministic() {
    let a = run(&["classify"], &data("orthant.json"));
    let b = run(&["classify"], &data("orthant.json"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn query_outside_the_set_is_an_input_error() {
    let file = scratch(
        "outside.json",
        r#"{"space":{"dim":2,"norm":"l2"},"cone":[[1,0],[0,1]],"set":{"points":[[0,0]]},"query":{"x0":[5,5]}}"#,
    );
    let out = run(&["classify"], &file);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_fields_are_rejected() {
    let file = scratch("typo.json", r#"{"space":{"dim":2,"norm":"l2"},"cone":[[1,0],[0,1]],"cones":[]}"#);
    assert_eq!(run(&["ssp"], &file).status.code(), Some(1));
}

#[test]
fn ssp_holds_with_witness() {
    let report = json(&run(&["ssp"], &data("ssp_pair.json")));
    assert_eq!(report["holds"], true);
    let w = &report["witness"];
    let (d1, d2) = (w["delta1"].as_f64().unwrap(), w["delta2"].as_f64().unwrap());
    assert!(0.0 < d1 && d1 < d2);
}

#[test]
fn ssp_fails_when_the_outer_cone_is_larger() {
    let file = scratch("ssp_fail.json", r#"{"space":{"dim":2,"norm":"linf"},"cone":[[1,0],[0,1]],"coneK":[[1,1]]}"#);
    let report = json(&run(&["ssp"], &file));
    assert_eq!(report["holds"], false);
    assert!(report["witness"].is_null());
}

#[test]
fn scalarize_rejects_alpha_outside_range() {
    let out = run(&["scalarize", "--f", "1,1", "--alpha", "5"], &data("orthant.json"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside admissible range"));
}

#[test]
fn scalarize_finds_query_as_unique_minimizer() {
    let report = json(&run(&["scalarize", "--f", "1,1", "--alpha", "1/2"], &data("orthant.json")));
    assert_eq!(report["solution"]["uniqueAtX0"], true);
}

#[test]
fn amin_accepts_explicit_lambda() {
    let report = json(&run(&["amin", "--f", "1,1", "--alpha", "4/3", "--lambda", "0.1"], &data("approx_golden.json")));
    assert_eq!(verdict(&report, "AMin")["status"], "yes");
}

#[test]
fn certify_finds_benson_certificate() {
    let out = run(&["certify", "--kind", "benson", "--strict"], &data("orthant.json"));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn strict_mode_flags_unknown_verdicts() {
    let relaxed = run(&["classify"], &data("near_boundary.json"));
    assert_eq!(relaxed.status.code(), Some(0));
    let report = json(&relaxed);
    assert_eq!(verdict(&report, "Be")["status"], "yes");
    assert_eq!(verdict(&report, "He")["status"], "unknown");
    assert_eq!(run(&["classify", "--strict"], &data("near_boundary.json")).status.code(), Some(3));
}

#[test]
fn svg_figure_is_written() {
    let dir = std::env::temp_dir().join(format!("proper-eff-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("golden.svg");
    let out = run(&["classify", "--svg", svg.to_str().unwrap()], &data("approx_golden.json"));
    assert!(out.status.success());
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn selftest_passes_on_small_run() {
    let out = bin().args(["selftest", "--seed", "7", "--count", "20"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("selftest passed"));
}
