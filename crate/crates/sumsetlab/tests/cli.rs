//! End-to-end runs of the binary: output formats and exit codes.

use std::process::{Command, Output};

fn sumsetlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumsetlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

#[test]
fn sumset_prints_the_set() {
    let out = sumsetlab(&["sumset", "--family", "g=5;{1,2};{3}"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "5:{1,2,3,4,5}");
}

#[test]
fn phi_single_value() {
    let out = sumsetlab(&["phi", "--family", "g=3;{1};{1,2}", "--rank", "1", "--m", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3");
}

#[test]
fn density_shnirelman_and_lower() {
    let odds = "0:{}|2:{1}";
    let out = sumsetlab(&["density", "--ep", odds]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1/2");
    let out = sumsetlab(&["density", "--ep", "3:{1,2,3}|2:{1}", "--lower"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1/2");
}

#[test]
fn transform_trace_is_json_lines() {
    let out = sumsetlab(&["transform", "--family", "g=3;{1};{1,2}", "--trace"]);
    assert!(out.status.success());
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid JSON"))
        .collect();
    assert!(!lines.is_empty());
    for step in &lines {
        for key in ["a0", "ell", "T", "before", "after"] {
            assert!(step.get(key).is_some(), "step missing {key}");
        }
    }
    // the trace drains the last set completely
    let terminal = lines.last().unwrap()["after"].as_str().unwrap().to_string();
    let check: sumsetlab::ranksum::SetFamily = terminal.parse().unwrap();
    assert!(check.set(check.len()).is_empty());
}

#[test]
fn etransform_reports_both_halves() {
    let out = sumsetlab(&["etransform", "--a", "Z5:{0,1}", "--b", "Z5:{0,2}", "--e", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("A(e) = "));
    assert!(text.contains("B(e) = "));
}

#[test]
fn subgroups_of_z6() {
    let out = sumsetlab(&["subgroups", "--group", "Z6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines: Vec<&str> = text.lines().collect();
    lines.sort_unstable();
    assert_eq!(lines, vec!["Z6:{0,1,2,3,4,5}", "Z6:{0,2,4}", "Z6:{0,3}", "Z6:{0}"]);
}

#[test]
fn check_kneser_z6_exhaustive_passes() {
    let out = sumsetlab(&["check", "kneser", "--group", "Z6", "--exhaustive"]);
    assert!(out.status.success(), "expected exit 0");
    assert!(stdout(&out).contains(" 0 fail,"));
}

#[test]
fn check_json_report_shape() {
    let out = sumsetlab(&["check", "dyson-bound", "--g", "4", "--n", "2", "--json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["v"], 1);
    assert_eq!(report["suite"], "dyson-bound");
    assert_eq!(report["fail"], 0);
    assert_eq!(report["instances"], 256);
}

#[test]
fn witness_log_replays_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("witnesses.jsonl");
    let log_arg = log.to_str().unwrap();
    let out = sumsetlab(&[
        "check", "mann", "--g", "4", "--log", log_arg, "--log-na",
    ]);
    assert!(out.status.success());
    // force some content: rerun basis2 logging not-applicable verdicts too
    let out = sumsetlab(&["check", "basis2", "--g", "6", "--log", log_arg, "--log-na"]);
    assert!(out.status.success());
    assert!(log.metadata().unwrap().len() > 0);
    let out = sumsetlab(&["replay", log_arg]);
    assert!(out.status.success(), "replay should find no mismatches");
    assert!(stdout(&out).contains("0 mismatches"));
}

#[test]
fn search_tight_finds_equality_cases() {
    let out = sumsetlab(&["search-tight", "dyson-bound", "--g", "3", "--n", "2"]);
    assert!(out.status.success());
    assert!(!stdout(&out).trim().is_empty());
}

#[test]
fn usage_errors_exit_2() {
    // unknown suite name
    let out = sumsetlab(&["check", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
    // exhaustive group suite without a group
    let out = sumsetlab(&["check", "kneser", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed family encoding
    let out = sumsetlab(&["sumset", "--family", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    // budget refusal is a resource error
    let out = sumsetlab(&["check", "mann", "--g", "8", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
}
