//! End-to-end runs of the `qdo` binary on the fixture scenarios.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn qdo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdo")).args(args).output().expect("qdo binary runs")
}

/// Builds the module of a scenario into a temporary file.
fn module(scenario: &str, dir: &tempfile::TempDir) -> String {
    let out = dir.path().join(scenario);
    let o = qdo(&["construct", "--scenario", fixture(scenario).to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out.to_str().unwrap().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = qdo(&["verify", &module("vq_b_a.json", &dir), "--algebra", "D"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["passed"], Value::Bool(true));

    let bad = qdo(&["verify", &module("remark_136.json", &dir)]);
    assert_eq!(bad.status.code(), Some(1));
    let v = &json(&bad)["violations"];
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["relation"], "Y1X=qsigma-1");
    assert_eq!(v[0]["offset"], 2);
    assert_eq!(v[0]["label"], "v3");
}

#[test]
fn isomorphic_pair_returns_an_intertwiner() {
    let dir = tempfile::tempdir().unwrap();
    let a = module("vq_f_b_a_f9.json", &dir);
    let b = module("v1_f_a_b_f9.json", &dir);
    let o = qdo(&["iso", &a, &b, "--algebra", "D"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "YES");
    assert_eq!(v["witness"]["type"], "intertwiner");
    assert_eq!(v["witness"]["blocks"].as_array().unwrap().len(), 6);
}

#[test]
fn extension_family_and_negative_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let o = qdo(&["extend", &module("with_breaks_aq.json", &dir)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["kind"], "FAMILY");
    assert_eq!(v["k"], 1);

    let cc = module("chain_cycle_f9.json", &dir);
    let o = qdo(&["analyze", &cc, "--checks", "dims,indecomposable", "--algebra", "AQ"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["checks"]["indecomposable"]["verdict"], "NO");
    let o = qdo(&["analyze", &cc, "--checks", "indecomposable", "--algebra", "D"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn windowed_irreducibility_is_not_applicable() {
    let dir = tempfile::tempdir().unwrap();
    let o = qdo(&["analyze", &module("vq_b_a.json", &dir), "--checks", "irreducible"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["checks"]["irreducible"]["verdict"], "NOT_APPLICABLE");
}

#[test]
fn run_executes_the_scenario_action() {
    let o = qdo(&["run", fixture("vq_f_b_a_f9.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["checks"]["irreducible"]["verdict"], "YES");
    let o = qdo(&["run", fixture("remark_136.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(qdo(&["verify", "/nonexistent/module.json"]).status.code(), Some(2));
    assert_eq!(qdo(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qdo(&["realize", "--field", "RATIONAL"]).status.code(), Some(2));
}

#[test]
fn realization_reports_pass() {
    let o = qdo(&["realize", "--field", "FUNCTION_FIELD", "--N", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["report"]["passed"], true);
    assert_eq!(v["matrices"]["d_1"][1][2], "[1,1]|[1]");
}
