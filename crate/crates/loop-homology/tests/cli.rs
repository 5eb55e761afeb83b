//! End-to-end runs of the `loophom` binary: exit codes, determinism, and
//! the JSON report schema.

use std::process::Command;

fn loophom(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_loophom"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn compute_exits_zero_and_is_byte_deterministic() {
    let a = loophom(&["compute", "s^n:even:2", "--max", "10"]);
    let b = loophom(&["compute", "s^n:even:2", "--max", "10"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("Z + Z/2"), "{text}");
}

#[test]
fn json_report_parses_and_round_trips() {
    let out = loophom(&["compute", "cp^n:2", "--max", "8", "--format", "json"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["space"], "cp^n:2");
    assert_eq!(value["max_total_degree"], 8);
    let groups = value["groups"].as_array().unwrap();
    assert_eq!(groups.len(), (8 + 4 + 1) as usize);
    // Reparse through the typed schema: identical bytes.
    let report: loop_homology::cli::ComputeReport = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(text, again);
}

#[test]
fn verify_exit_codes_follow_the_contract() {
    let ok = loophom(&["verify", "s^n:odd:3", "--max", "8"]);
    assert_eq!(ok.status.code(), Some(0));
    let usage = loophom(&["verify", "sphere-of-doom"]);
    assert_eq!(usage.status.code(), Some(2));
    let missing = loophom(&["frobnicate"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn universal_trace_runs_from_the_binary() {
    let out = loophom(&["universal", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("step 4 [dualization]"), "{text}");
    let odd = loophom(&["universal", "3"]);
    assert_eq!(odd.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join("loophom-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s2.json");
    let out = loophom(&[
        "compute",
        "s^n:even:2",
        "--max",
        "6",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["space"], "s^n:even:2");
}
