//! Binary-level tests of the command-line front end: exit codes, report
//! byte-stability, artifact layout, and the structured error channel.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isoprofile"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_graph(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const TRIPLY_PUNCTURED: &str = r#"{
  "vertices": [{"id": "a", "f": 1}],
  "edges": [
    {"src": "-inf", "dst": "a"},
    {"src": "a", "dst": "+inf"},
    {"src": "a", "dst": "+inf"}
  ],
  "nu": 1
}"#;

#[test]
fn verify_twice_is_byte_identical_and_green() {
    let a = run(&["verify", "--seed", "42", "--targets", "graph,oracle"]);
    let b = run(&["verify", "--seed", "42", "--targets", "graph,oracle"]);
    assert_eq!(a.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"seed\": 42"));
    assert!(text.contains("\"passed\": true"));
    assert!(!text.contains("\"passed\": false"));
}

#[test]
fn coverage_gap_exits_one_with_the_interval_in_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(dir.path(), "triply_punctured.json", TRIPLY_PUNCTURED);
    let out = run(&["surface", "coverage", "--in", &graph]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("uncovered area interval"), "report: {text}");
    assert!(text.contains("\"passed\": false"));
}

#[test]
fn cap_csv_contains_the_identity_row() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = run(&["rev", "cap", "--delta", "0.1", "--k", "100", "--alpha", "10", "--out", out_dir]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("cap_profile.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "v,I,K");
    let row = csv
        .lines()
        .find(|l| l.starts_with("5.0000000000000000e0,"))
        .expect("row at v = 5");
    assert!(row.split(',').nth(1) == Some("5.0000000000000000e0"), "I(5) != 5 in {row}");
}

#[test]
fn out_dir_holds_report_artifacts_and_the_timestamp_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = run(&["oracle", "flux", "--r", "0.4", "--out", out_dir]);
    assert_eq!(out.status.code(), Some(0));
    let report = std::fs::read_to_string(dir.path().join("oracle_flux_report.json")).unwrap();
    assert_eq!(report.trim_end(), String::from_utf8(out.stdout).unwrap().trim_end());
    assert!(!report.contains("unix_time"), "timestamps must stay out of reports");
    assert!(dir.path().join("flux.json").exists());
    let meta = std::fs::read_to_string(dir.path().join("run_meta.json")).unwrap();
    assert!(meta.contains("unix_time"));
}

#[test]
fn usage_and_module_errors_use_distinct_exit_codes() {
    let usage = run(&["rev", "cap", "--delta", "0.1"]);
    assert_eq!(usage.status.code(), Some(2));

    let module = run(&["oracle", "flux", "--r", "5.0"]);
    assert_eq!(module.status.code(), Some(3));
    let err = String::from_utf8(module.stderr).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(err.trim()).expect("structured stderr");
    assert_eq!(parsed["error"]["code"], 9);
    assert!(parsed["error"]["message"].as_str().unwrap().contains("log 2"));
}

#[test]
fn parse_errors_carry_the_location() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(dir.path(), "broken.json", "{\"vertices\": [{\"id\": 3}]}");
    let out = run(&["graph", "validate", "--in", &graph]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    let msg = parsed["error"]["message"].as_str().unwrap();
    assert!(msg.contains("line") && msg.contains("column"), "no location in: {msg}");
}

#[test]
fn thread_cap_is_respected() {
    let out = bin()
        .env("ISOPROFILE_THREADS", "1")
        .args(["verify", "--seed", "7", "--targets", "oracle"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // Same command without the cap: identical bytes, since reports never
    // depend on scheduling.
    let free = run(&["verify", "--seed", "7", "--targets", "oracle"]);
    assert_eq!(out.stdout, free.stdout);
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["rev", "--help"]).status.code(), Some(0));
}
