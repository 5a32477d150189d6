use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    dir.join(name).to_string_lossy().into_owned()
}

fn compat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_compat")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn reconstruct_discrete_four() {
    let out = compat(&["reconstruct", &data("discrete-4.json"), "--grid", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["ultrafilter_count"], 4);
    assert_eq!(report["verified"], true);
    assert_eq!(report["upsilon_homeomorphism"], true);
}

#[test]
fn reconstruct_non_discrete() {
    let out = compat(&["reconstruct", &data("two-sierpinski.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["ultrafilter_count"], 2);
    assert_eq!(report["upsilon_injective"], false);
    assert_eq!(report["verified"], true);
}

#[test]
fn validate_reports_offending_fiber() {
    let out = compat(&["validate", &data("sierpinski.json"), &data("sierpinski-bad-functions.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("fiber [1]"), "{err}");

    let out = compat(&["validate", &data("sierpinski.json"), &data("sierpinski-functions.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["functions"], 2);
}

#[test]
fn induce_recovers_bundled_phi() {
    let out = compat(&["induce", &data("phi-map.json"), "--expect", &data("phi.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["assignment"], serde_json::json!([2, 0, 1]));
    assert_eq!(report["matches_expected"], true);
    assert_eq!(report["theta_sizes"], serde_json::json!([8, 8]));
}

#[test]
fn non_isomorphism_fails_with_witness() {
    let out = compat(&["check-iso", &data("not-iso-map.json")]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["is_compat_iso"], false);
    assert!(report["witness"].is_object());

    let out = compat(&["induce", &data("not-iso-map.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["failed_stage"], "precondition");
}

#[test]
fn check_iso_accepts_phi_map() {
    let out = compat(&["check-iso", &data("phi-map.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["additive"]["violations"], serde_json::json!([]));
    assert_eq!(report["clopen"]["violations"], serde_json::json!([]));
}

#[test]
fn exit_codes() {
    assert_eq!(compat(&["bogus"]).status.code(), Some(2));
    assert_eq!(compat(&["reconstruct", &data("discrete-4.json"), "--frob"]).status.code(), Some(2));
    assert_eq!(compat(&["reconstruct", &data("missing.json")]).status.code(), Some(2));
    assert_eq!(compat(&["reconstruct", &data("discrete-4.json"), "--grid", "0,x"]).status.code(), Some(2));
    let out = compat(&["reconstruct", &data("discrete-4.json"), "--max-points", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let wide: Vec<String> = (0..=32).map(|v| v.to_string()).collect();
    let out = compat(&["reconstruct", &data("discrete-4.json"), "--grid", &wide.join(",")]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(compat(&["reconstruct", &data("discrete-4.json"), "--format", "dot"]).status.code(), Some(2));
}

#[test]
fn dot_outputs() {
    let out = compat(&["export-dot", &data("two-sierpinski.json")]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("1 -> 0;") && text.contains("3 -> 2;"), "{text}");

    let out = compat(&["lattice", &data("sierpinski.json"), "--kind", "ro", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("digraph lattice"));

    let out = compat(&["spectrum", &data("two-sierpinski.json"), "--kind", "ultra"]);
    let report = json(&out);
    assert_eq!(report["discrete"], true);
    assert_eq!(report["points"].as_array().unwrap().len(), 2);
}

#[test]
fn demo_trace() {
    let out = compat(&["demo"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["is_compat_iso"], true);
    assert_eq!(report["is_identity"], false);
    assert_eq!(report["trace"]["reversed"], 0);
    assert_eq!(compat(&["demo", "--instance", "9"]).status.code(), Some(2));
}

#[test]
fn suite_is_deterministic_and_writes_output() {
    let dir = std::env::temp_dir().join(format!("compat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("suite.json");
    let args = ["suite", "--criterion", "6", "--criterion", "7", "--seed", "3", "--format", "json"];
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_string_lossy().into_owned();
    with_out.extend(["--out", &p]);
    assert_eq!(compat(&with_out).status.code(), Some(0));
    let first: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let second = json(&compat(&args));
    let strip = |v: &Value| -> Vec<(Value, Value)> {
        v["criteria"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["passed"].clone(), c["detail"].clone()))
            .collect()
    };
    assert_eq!(strip(&first), strip(&second));
    assert_eq!(first["seed"], 3);
    std::fs::remove_dir_all(dir).unwrap();
}
