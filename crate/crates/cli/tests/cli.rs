use std::process::{Command, Output};

fn qdouble(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdouble")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = qdouble(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

const RUNS: &[&[&str]] = &[
    &["fusion-stats", "--trials", "200", "--seed", "3"],
    &["suppression", "--l", "1,2", "--trials", "40", "--seed", "3"],
    &["distinguish", "--encoding", "strong", "--trials", "200", "--seed", "3"],
    &["distinguish", "--encoding", "phipair", "--trials", "200", "--seed", "3", "--format", "csv"],
    &["hadamard", "--trials", "200", "--seed", "3"],
    &["ground-state-check", "--rows", "2", "--cols", "3"],
];

#[test]
fn fixed_seed_runs_are_byte_identical() {
    for args in RUNS {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}

#[test]
fn sequential_matches_default_scheduler() {
    for args in RUNS {
        let mut seq = args.to_vec();
        seq.push("--sequential");
        assert_eq!(stdout(args), stdout(&seq), "{args:?}");
    }
}

#[test]
fn report_schema() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&["fusion-stats", "--trials", "100", "--seed", "9"])).unwrap();
    assert_eq!(json["experiment"], "fusion-stats");
    assert_eq!(json["seed"], 9);
    assert_eq!(json["config"]["trials"], 100);
    assert_eq!(json["wall_ms"], 0);
    let points = json["points"].as_array().unwrap();
    assert!(points.iter().all(|p| p["x"].is_string() && p["mean"].is_number() && p["stderr"].is_number() && p["n"].is_u64()));
}

#[test]
fn ground_state_energy_reported() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&["ground-state-check"])).unwrap();
    let points = json["points"].as_array().unwrap();
    let get = |x: &str| points.iter().find(|p| p["x"] == x).unwrap()["mean"].as_f64().unwrap();
    assert_eq!(get("energy"), get("expected_energy"));
    assert_eq!(get("entries"), 216.0);
}

#[test]
fn csv_output() {
    let csv = stdout(&["hadamard", "--trials", "50", "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,mean,stderr,n"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# suppression defaults\ntrials = 30\nl = 1\np = 0.2\nformat = json\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let json: serde_json::Value = serde_json::from_str(&stdout(&["suppression", "--config", cfg, "--trials", "20"])).unwrap();
    assert_eq!(json["config"]["trials"], 20);
    assert_eq!(json["config"]["ls"], serde_json::json!([1]));
    assert_eq!(json["config"]["p"], 0.2);
}

#[test]
fn writes_to_file_and_records_timing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let printed = stdout(&["fusion-stats", "--trials", "50", "--timing", "--out", out.to_str().unwrap()]);
    assert!(printed.is_empty());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(json["wall_ms"].is_u64());
}

#[test]
fn rejects_bad_input() {
    for args in [
        &["distinguish", "--encoding", "lambda"][..],
        &["suppression", "--p", "1.5"],
        &["suppression", "--errors", "left:e"],
        &["hadamard", "--encoding", "abelian"],
        &["ground-state-check", "--rows", "5", "--cols", "5"],
    ] {
        let out = qdouble(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty());
    }
}
