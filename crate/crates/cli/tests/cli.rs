use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn liplab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liplab"))
        .args(args)
        .current_dir(dir)
        .env_remove("LIPLAB_MAX_ENUM")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("mp.json"), r#"{"type": "matching_pennies", "k": 1, "m": 2}"#).unwrap();
    fs::write(dir.path().join("uniform.json"), r#"{"kind": "uniform"}"#).unwrap();
    fs::write(dir.path().join("corner.json"), r#"{"kind": "pure", "actions": [1, 1]}"#).unwrap();
    fs::write(dir.path().join("broken.json"), "{ not json").unwrap();
    dir
}

#[test]
fn verify_exit_codes() {
    let dir = workspace();
    let p = dir.path();
    let ok = liplab(p, &["verify", "--game", "mp.json", "--profile", "uniform.json", "--concept", "ANE"]);
    assert_eq!(code(&ok), 0);
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["holds"], true);
    assert_eq!(report["max_regret"], 0.0);

    let fails = liplab(p, &["verify", "--game", "mp.json", "--profile", "corner.json", "--concept", "PNE", "--epsilon", "0.5"]);
    assert_eq!(code(&fails), 1);
    let report: serde_json::Value = serde_json::from_slice(&fails.stdout).unwrap();
    assert_eq!(report["max_regret"], 1.0);

    let malformed = liplab(p, &["verify", "--game", "broken.json", "--profile", "uniform.json", "--concept", "ANE"]);
    assert_eq!(code(&malformed), 2);
    assert!(!malformed.stderr.is_empty());

    let mismatch = liplab(p, &["verify", "--game", "mp.json", "--profile", "corner.json", "--concept", "ANE"]);
    assert_eq!(code(&mismatch), 2);
}

#[test]
fn failed_validation_writes_nothing() {
    let dir = workspace();
    let p = dir.path();
    let cases: [&[&str]; 5] = [
        &["verify", "--game", "broken.json", "--profile", "uniform.json", "--concept", "ANE", "--out", "o.json"],
        &["adversary", "--algorithm", "no-such-algorithm", "--out", "o.json"],
        &["adversary", "--alpha", "0.9", "--out", "o.json"],
        &["existence", "--n", "40", "--out", "o.json"],
        &["reduce", "--game", "mp.json", "--sizes", "2", "--out", "o.json"],
    ];
    for args in cases {
        let out = liplab(p, args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!p.join("o.json").exists(), "{args:?}");
    }
}

#[test]
fn adversary_reports_a_verdict_per_run() {
    let dir = workspace();
    let p = dir.path();
    let out = liplab(p, &["adversary", "--algorithm", "uniform-output,point-mass", "--k", "1,2", "--out", "runs.json"]);
    assert_eq!(code(&out), 0);
    let runs: serde_json::Value = serde_json::from_str(&fs::read_to_string(p.join("runs.json")).unwrap()).unwrap();
    let runs = runs.as_array().expect("array of runs");
    assert_eq!(runs.len(), 4);
    for run in runs {
        let verdict = run["verdict"].as_str().unwrap();
        assert!(["lower_bound_confirmed", "failed_on_base"].contains(&verdict), "{verdict}");
    }
    let csv = liplab(p, &["adversary", "--format", "csv"]);
    assert_eq!(code(&csv), 0);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("lower_bound_confirmed"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = workspace();
    let p = dir.path();
    let runs: [&[&str]; 4] = [
        &["existence", "--n", "8", "--trials", "20", "--seed", "3", "--format", "csv"],
        &["adversary", "--algorithm", "random-sampler:4:7,scan-then-empirical:3", "--k", "2"],
        &["region", "--alpha", "1/3", "--grid", "5"],
        &["reduce", "--game", "mp.json", "--sizes", "2,2", "--delta", "0.05", "--seed", "4"],
    ];
    for args in runs {
        let first = liplab(p, args);
        let second = liplab(p, args);
        assert_eq!(code(&first), code(&second));
        assert!(code(&first) < 2, "{args:?}: {}", String::from_utf8_lossy(&first.stderr));
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn existence_csv() {
    let dir = workspace();
    let out = liplab(dir.path(), &["existence", "--n", "8", "--trials", "10", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("seed,trial,min_epsilon,found,profile"));
    assert_eq!(lines.count(), 10);
}

#[test]
fn region_flags_a_reached_cap() {
    let dir = workspace();
    let strict = liplab(dir.path(), &["region", "--alpha", "1/3", "--grid", "3"]);
    assert_eq!(code(&strict), 0);
    let tight = liplab(dir.path(), &["region", "--alpha", "1/6", "--grid", "3"]);
    assert_eq!(code(&tight), 1);
}

#[test]
fn reduce_modes() {
    let dir = workspace();
    let p = dir.path();
    let pop = liplab(p, &["reduce", "--game", "mp.json", "--sizes", "2,3"]);
    assert_eq!(code(&pop), 0);
    let v: serde_json::Value = serde_json::from_slice(&pop.stdout).unwrap();
    assert_eq!(v["accounting"]["base_distribution_queries"], 4);
    assert_eq!(v["transfer"]["all_aggregates_wsne"], true);

    let multi = liplab(p, &["reduce", "--lambda", "0.1,0.3,0.6,1.0"]);
    assert_eq!(code(&multi), 0, "{}", String::from_utf8_lossy(&multi.stderr));
    let v: serde_json::Value = serde_json::from_slice(&multi.stdout).unwrap();
    assert_eq!(v["sizes"], serde_json::json!([1, 1, 2, 2]));
}

#[test]
fn enumeration_limit_from_environment() {
    let dir = workspace();
    let out = Command::new(env!("CARGO_BIN_EXE_liplab"))
        .args(["existence", "--n", "8", "--trials", "1"])
        .current_dir(dir.path())
        .env("LIPLAB_MAX_ENUM", "16")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let bad = Command::new(env!("CARGO_BIN_EXE_liplab"))
        .args(["existence", "--n", "8", "--trials", "1"])
        .current_dir(dir.path())
        .env("LIPLAB_MAX_ENUM", "lots")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}
