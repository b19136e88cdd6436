//! End-to-end CLI tests: subcommands, exit codes, and --emit output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_surgery-calc"))
}

fn scripts_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn run_pipeline_exits_zero() {
    let out = bin()
        .args(["run"])
        .arg(scripts_dir().join("z_construction.surg"))
        .args(["--n", "2", "--verify"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("final.freedman: (3, 8)"));
    assert!(stdout.contains("final.sw_values: [8, 8]"));
}

#[test]
fn range_run_emits_certificate_and_file() {
    let dir = std::env::temp_dir().join(format!("surgery-calc-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let emit = dir.join("out.txt");
    let out = bin()
        .args(["run"])
        .arg(scripts_dir().join("z_construction.surg"))
        .args(["--n", "1..3"])
        .arg("--emit")
        .arg(&emit)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("nondiffeomorphism certificate"));
    assert!(stdout.contains("3 distinct groups"));
    let written = std::fs::read_to_string(&emit).unwrap();
    assert_eq!(written, stdout);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_script_is_exit_2() {
    let out = bin().args(["run", "/nonexistent.surg"]).output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn parse_error_is_exit_2() {
    let dir = std::env::temp_dir().join(format!("surgery-calc-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let script = dir.join("bad.surg");
    std::fs::write(&script, "start E2\nfrobnicate\n").unwrap();
    let out = bin().arg("run").arg(&script).output().unwrap();
    assert_eq!(code(&out), 2);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("unknown statement"), "{stderr}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn failing_assertion_is_exit_1_only_with_verify() {
    let dir = std::env::temp_dir().join(format!("surgery-calc-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dataset = dir.join("d.lat");
    std::fs::write(&dataset, "generators T S\ngram T = S:1\ngram S = S:-2\n").unwrap();
    let script = dir.join("s.surg");
    std::fs::write(
        &script,
        "start E2 dataset=\"d.lat\"\nassert_ledger e=0 sigma=0 b2plus=0 b2minus=0\n",
    )
    .unwrap();

    let out = bin().arg("run").arg(&script).arg("--verify").output().unwrap();
    assert_eq!(code(&out), 1);

    let out = bin().arg("run").arg(&script).output().unwrap();
    assert_eq!(code(&out), 0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn check_config_rejects_bad_pairs() {
    let out = bin().args(["check-config", "4", "2"]).output().unwrap();
    assert_eq!(code(&out), 2);
    let out = bin().args(["check-config", "2", "1"]).output().unwrap();
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("L(4, -1)"));
}

#[test]
fn bad_range_spec_is_exit_2() {
    let out = bin()
        .args(["run"])
        .arg(scripts_dir().join("z_construction.surg"))
        .args(["--n", "5..2"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}
