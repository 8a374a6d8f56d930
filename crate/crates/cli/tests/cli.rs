use std::process::{Command, Output};

use psieve_core::ps::PsGamma;
use psieve_core::report::{parse_scan_table, Table};
use serde_json::Value;

fn psieve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psieve")).args(args).output().expect("spawn psieve")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn levels_json_reports_three_eighths() {
    let text = stdout(&psieve(&["levels", "--gamma", "1", "--eps", "0", "--format", "json"]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["rows"][0]["xi_thm1"].as_f64(), Some(0.375));
}

#[test]
fn pairs_word_aa() {
    let text = stdout(&psieve(&["pairs", "--word", "AA"]));
    assert!(text.contains("1/14 11/14"), "{text}");
}

#[test]
fn threshold_lies_below_the_printed_bound() {
    let text = stdout(&psieve(&["threshold", "--tol", "1e-8"]));
    let t: Table = Table::parse_csv(&text).unwrap();
    let v: f64 = t.get(0, "gamma_star").unwrap();
    assert!(v > 0.998 && v < 0.9989445, "{v}");
}

#[test]
fn exit_codes() {
    assert_eq!(psieve(&["count", "--bogus"]).status.code(), Some(64));
    assert_eq!(psieve(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(psieve(&["count", "--gamma", "0.4"]).status.code(), Some(1));
    assert_eq!(psieve(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_flag_writes_the_file() {
    let dir = std::env::temp_dir().join(format!("psieve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("count.csv");
    let out = psieve(&["count", "--gamma", "0.95", "--x", "10000", "--out", path.to_str().unwrap()]);
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r') && text.ends_with('\n'));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_psieve"))
            .args(["bv", "--gamma", "0.999", "--x", "100000", "--xi", "0.3", "--a", "1"])
            .env("PSIEVE_THREADS", threads)
            .output()
            .unwrap();
        stdout(&out)
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn scan_output_passes_reverification() {
    let text = stdout(&psieve(&["scan", "--gamma", "0.999", "--x", "50000", "--r", "3"]));
    let g = PsGamma::new(0.999).unwrap();
    let recs = parse_scan_table(&Table::parse_csv(&text).unwrap(), &g, 3).unwrap();
    assert!(!recs.is_empty());
}

#[test]
fn identity_check_is_clean() {
    assert!(psieve(&["identity-check", "--x", "50,100"]).status.success());
}
