//! End-to-end tests of the `abshift` binary: argument parsing, output
//! formats, file sinks and exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abshift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|s| s.to_string())
        .collect()
}

#[test]
fn expand_from_parameters() {
    let out = run(&["expand", "--alpha", "0", "--beta", "2", "--depth", "5"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    // Header + 5 digit rows + 2 reconstruction rows.
    assert_eq!(lines.len(), 8);
    let digit_vs: Vec<u64> = lines
        .iter()
        .filter_map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            (v["record"] == "digit").then(|| v["v"].as_u64().unwrap())
        })
        .collect();
    assert_eq!(digit_vs, vec![1, 1, 1, 1, 1]);
}

#[test]
fn expand_solves_lemma_family() {
    let out = run(&["expand", "--u-period", "0", "--v", "4,1", "--N", "5", "--depth", "6"]);
    assert!(out.status.success());
    let header: serde_json::Value =
        serde_json::from_str(&stdout_lines(&out)[0]).unwrap();
    assert_eq!(header["record"], "params");
    assert_eq!(header["solved"], true);
    assert!(header["beta_dec"]
        .as_str()
        .unwrap()
        .starts_with("4.302775638")
        || header["beta_dec"].as_str().unwrap().starts_with("4.302775637"));
}

#[test]
fn check_spec_reports_certificate() {
    let out = run(&[
        "check-spec",
        "--u-period",
        "0",
        "--v",
        "4,1",
        "--N",
        "5",
        "--depth-n",
        "50",
        "--depth-j",
        "100",
    ]);
    assert!(out.status.success());
    let last: serde_json::Value =
        serde_json::from_str(stdout_lines(&out).last().unwrap()).unwrap();
    assert_eq!(last["record"], "verdict");
    assert_eq!(last["verdict"], "Yes");
    assert_eq!(last["certificate"], "digit-disjoint");
}

#[test]
fn scan_emits_witnesses_and_trailer() {
    let out = run(&[
        "scan",
        "--seed-preset",
        "beta-shift",
        "--N",
        "5",
        "--grid",
        "8",
        "--vlen",
        "1",
        "--depth",
        "40",
        "--workers",
        "2",
    ]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    let witnesses = lines
        .iter()
        .filter(|l| l.contains("\"record\":\"witness\""))
        .count();
    assert_eq!(witnesses, 3);
    let trailer: serde_json::Value = serde_json::from_str(lines.last().unwrap()).unwrap();
    assert_eq!(trailer["record"], "lipschitz");
    assert_eq!(trailer["within_bound"], true);
}

#[test]
fn dimension_flags_formula_discrepancy() {
    let out = run(&["dimension", "--N", "6", "--depth", "6"]);
    assert!(out.status.success());
    let rec: serde_json::Value = serde_json::from_str(&stdout_lines(&out)[0]).unwrap();
    assert_eq!(rec["N"], 6);
    assert_eq!(rec["discrepancy"], true);
    assert!(rec["moran"].as_str().unwrap().starts_with("0.7737"));
    assert!(rec["paper_formula"].as_str().unwrap().starts_with("0.6131"));
}

#[test]
fn entropy_csv_output() {
    let out = run(&[
        "entropy",
        "--preset",
        "golden",
        "--depth",
        "8",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "record,count,n");
    assert_eq!(lines[1], "count,2,1");
    assert_eq!(lines[2], "count,3,2");
    assert!(lines.iter().any(|l| l.starts_with("entropy-fit,")));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("abshift-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("witnesses.jsonl");
    let out = run(&[
        "scan",
        "--seed-preset",
        "beta-shift",
        "--N",
        "5",
        "--grid",
        "4",
        "--vlen",
        "1",
        "--depth",
        "32",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let contents = std::fs::read_to_string(&path).unwrap();
    assert!(contents.lines().count() >= 4);
    std::fs::remove_file(&path).ok();
}

#[test]
fn precondition_violations_exit_2() {
    // N below K + 3 for the k3 preset (K = 3).
    let out = run(&["scan", "--seed-preset", "k3", "--N", "4", "--grid", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    // Banded digit violation in v.
    let out = run(&["expand", "--u-period", "0", "--v", "4,4", "--N", "5"]);
    assert_eq!(out.status.code(), Some(2));

    // Missing parameters entirely.
    let out = run(&["expand", "--depth", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_overruns_exit_3() {
    let out = run(&["entropy", "--preset", "full2", "--depth", "40"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn scan_worker_count_does_not_change_output() {
    let base = run(&[
        "scan", "--seed-preset", "beta-shift", "--N", "6", "--grid", "7", "--vlen", "1",
        "--depth", "36",
    ]);
    let threaded = run(&[
        "scan", "--seed-preset", "beta-shift", "--N", "6", "--grid", "7", "--vlen", "1",
        "--depth", "36", "--workers", "4",
    ]);
    assert!(base.status.success() && threaded.status.success());
    assert_eq!(base.stdout, threaded.stdout);
}
