use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const S3: &str = r#"{"n":6,"flavor":"pairs","classes":[[[0,3],[0,4],[1,5]],[[1,3],[2,4],[2,5]]]}"#;
const FAN: &str = r#"{"n":3,"flavor":"pairs","classes":[[[0,2],[1,2]]]}"#;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_identity-lab")).args(args).current_dir(dir).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s3.json"), S3).unwrap();
    std::fs::write(dir.path().join("fan.json"), FAN).unwrap();
    dir
}

#[test]
fn builtin_prints_pinned_identity() {
    let dir = fixture();
    let o = run(dir.path(), &["builtin", "--family", "sk", "--k", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim_end(), S3);
    let o = run(dir.path(), &["builtin", "--family", "sk", "--k", "3", "--out", "x.json", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(dir.path().join("x.json")).unwrap().trim_end(), S3);
}

#[test]
fn check_exit_codes_and_witness() {
    let dir = fixture();
    assert_eq!(code(&run(dir.path(), &["check", "--in", "s3.json"])), 3);
    assert_eq!(code(&run(dir.path(), &["check", "--in", "s3.json", "--strengthened"])), 3);
    let o = run(dir.path(), &["check", "--in", "fan.json", "--witness", "w.json"]);
    assert_eq!(code(&o), 0);
    let w: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("w.json")).unwrap()).unwrap();
    assert_eq!(w["accepted"], true);
    assert_eq!(w["h"], serde_json::json!([0, 1]));
    assert_eq!(w["edges"], serde_json::json!([[0, 1]]));
}

#[test]
fn explain_accepts_honest_and_rejects_tampered_verdicts() {
    let dir = fixture();
    assert_eq!(code(&run(dir.path(), &["check", "--in", "fan.json", "--witness", "w.json"])), 0);
    assert_eq!(code(&run(dir.path(), &["explain", "--in", "fan.json", "--verdict", "w.json"])), 0);

    let mut w: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("w.json")).unwrap()).unwrap();
    w["h"][1] = Value::from(0);
    std::fs::write(dir.path().join("bad.json"), w.to_string()).unwrap();
    let o = run(dir.path(), &["explain", "--in", "fan.json", "--verdict", "bad.json"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("re-verification failed"));

    let o = run(dir.path(), &["explain", "--in", "s3.json", "--json"]);
    assert_eq!(code(&o), 3);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["exit_code"], 3);
    assert_eq!(r["result"]["accepted"], false);
}

#[test]
fn member_modes() {
    let dir = fixture();
    assert_eq!(code(&run(dir.path(), &["member", "--in", "fan.json", "--max-size", "4"])), 0);
    assert_eq!(code(&run(dir.path(), &["member", "--in", "fan.json", "--max-size", "4", "--ordered"])), 3);
    assert_eq!(code(&run(dir.path(), &["member", "--in", "s3.json", "--max-size", "6"])), 3);
    assert_eq!(code(&run(dir.path(), &["catalog", "--max-size", "4", "--out", "c4.json"])), 0);
    assert_eq!(code(&run(dir.path(), &["member", "--in", "fan.json", "--catalog", "c4.json"])), 0);
}

#[test]
fn oracle_and_arrow() {
    let dir = fixture();
    std::fs::write(dir.path().join("mp.json"), r#"{"builtin":"min_pair","n":8}"#).unwrap();
    assert_eq!(code(&run(dir.path(), &["oracle", "--coloring", "mp.json", "--identity", "s3.json"])), 3);
    assert_eq!(code(&run(dir.path(), &["oracle", "--coloring", "mp.json", "--identity", "fan.json"])), 0);
    assert_eq!(code(&run(dir.path(), &["arrow", "--n", "3", "--identity", "fan.json", "--colors", "2"])), 0);
    assert_eq!(code(&run(dir.path(), &["arrow", "--n", "3", "--identity", "fan.json", "--colors", "3"])), 3);
}

#[test]
fn simplify_and_extend_order() {
    let dir = fixture();
    std::fs::write(dir.path().join("full.json"), r#"{"n":3,"flavor":"full","classes":[[[0,1],[0,2]],[[0],[1]]]}"#)
        .unwrap();
    let o = run(dir.path(), &["simplify", "--in", "full.json", "--k", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim_end(), r#"{"n":3,"flavor":"full","classes":[[[0],[1]]]}"#);
    assert_eq!(code(&run(dir.path(), &["simplify", "--in", "s3.json", "--k", "2"])), 1);

    let o = run(dir.path(), &["extend-order", "--in", "fan.json", "--out", "ext.json"]);
    assert_eq!(code(&o), 0);
    let ext: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("ext.json")).unwrap()).unwrap();
    assert_eq!(ext["n"], 5);
}

#[test]
fn usage_io_and_guard_errors() {
    let dir = fixture();
    assert_eq!(code(&run(dir.path(), &[])), 2);
    assert_eq!(code(&run(dir.path(), &["check"])), 2);
    assert_eq!(code(&run(dir.path(), &["builtin", "--family", "sk"])), 2);
    assert_eq!(code(&run(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&run(dir.path(), &["check", "--in", "missing.json"])), 1);
    std::fs::write(dir.path().join("junk.json"), "{\"n\":3}").unwrap();
    assert_eq!(code(&run(dir.path(), &["check", "--in", "junk.json"])), 1);
    assert_eq!(code(&run(dir.path(), &["catalog", "--max-size", "9"])), 4);
    let o = run(dir.path(), &["--version"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("identity-lab 0.1.0"));
}

#[test]
fn json_reports_are_reproducible() {
    let dir = fixture();
    let a = run(dir.path(), &["--json", "check", "--in", "s3.json"]);
    let b = run(dir.path(), &["--threads", "2", "--json", "check", "--in", "s3.json"]);
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["tool"], "identity-lab 0.1.0");
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
    assert!(r.get("wall_time_ms").is_none());
    let t: Value = serde_json::from_slice(&run(dir.path(), &["--json", "--timing", "check", "--in", "s3.json"]).stdout).unwrap();
    assert!(t["wall_time_ms"].is_u64());

    std::fs::write(dir.path().join("s3b.json"), format!("{S3} ")).unwrap();
    let c: Value = serde_json::from_slice(&run(dir.path(), &["--json", "check", "--in", "s3b.json"]).stdout).unwrap();
    assert_ne!(c["inputs_digest"], r["inputs_digest"]);
}
