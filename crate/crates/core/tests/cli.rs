mod common;

use std::path::Path;
use std::process::Command;

use common::*;
use fournet::cli::run_cli;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["fournet"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decide_prints_decision_and_ranking() {
    let state = data_dir().join("test_state.json");
    let (code, out, _) = run(&["decide", "--state", path(&state), "--style", "2:1"]);
    assert_eq!(code, 0);
    assert!(out.contains("decision: pass to t9"), "{out}");
    // offside teammate ranks last with a zero score
    assert!(
        out.lines()
            .last()
            .unwrap()
            .trim_end()
            .ends_with("t11   0          0  0"),
        "{out}"
    );

    let (code, out, _) = run(&["decide", "--state", path(&state), "--threshold", "0.05"]);
    assert_eq!(code, 0);
    assert!(out.contains("decision: shoot"), "{out}");
}

#[test]
fn decide_json_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("n.dot");
    let state = data_dir().join("test_state.json");
    let (code, out, _) = run(&[
        "--json",
        "decide",
        "--state",
        path(&state),
        "--style",
        "2:1",
        "--dot",
        path(&dot),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["decision"]["type"], "pass");
    assert_eq!(v["decision"]["target"], 9);
    assert_eq!(v["ranked"].as_array().unwrap().len(), 10);
    let want = std::fs::read(golden_dir().join("test_state.dot")).unwrap();
    assert_eq!(std::fs::read(dot).unwrap(), want);
}

#[test]
fn exit_codes() {
    let state = data_dir().join("test_state.json");
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["decide"]).0, 2);
    assert_eq!(
        run(&["decide", "--state", path(&state), "--style", "3"]).0,
        2
    );
    assert_eq!(
        run(&["simulate", "--state", path(&state), "--trials", "0"]).0,
        2
    );
    assert_eq!(run(&["--version"]).0, 0);
    assert_eq!(run(&["help", "compare"]).0, 0);
    let (code, _, err) = run(&["decide", "--state", path(&state), "--threshold", "1.5"]);
    assert_eq!(code, 1);
    assert!(err.contains("threshold"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"pitch":{"length":105,"width":68},"team":[],"opponents":[],"holder":1}"#,
    )
    .unwrap();
    let (code, _, err) = run(&["decide", "--state", path(&bad)]);
    assert_eq!(code, 1);
    assert!(err.contains("team") && err.contains("expected 11"), "{err}");
}

#[test]
fn simulate_writes_log_and_manifest_then_replays() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.json");
    let state = data_dir().join("test_state.json");
    let (code, out, err) = run(&[
        "simulate",
        "--state",
        path(&state),
        "--style",
        "2:1",
        "--trials",
        "5",
        "--seed",
        "42",
        "--out",
        path(&log),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("mean security"), "{out}");
    let golden = std::fs::read(golden_dir().join("simulate_seed42.json")).unwrap();
    assert_eq!(std::fs::read(&log).unwrap(), golden);

    let manifest_path = dir.path().join("log.json.manifest.json");
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["seed"], 42);
    assert_eq!(manifest["args"]["style"], "2:1");
    let digest = manifest["inputs"][path(&state)].as_str().unwrap();
    assert_eq!(
        digest,
        fournet::io::sha256_hex(&std::fs::read(&state).unwrap())
    );

    let again = dir.path().join("again.json");
    let (code, _, err) = run(&[
        "replay",
        "--manifest",
        path(&manifest_path),
        "--out",
        path(&again),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(std::fs::read(&again).unwrap(), golden);
}

#[test]
fn replay_refuses_changed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    std::fs::copy(data_dir().join("test_state.json"), &state).unwrap();
    let log = dir.path().join("log.json");
    let (code, ..) = run(&[
        "simulate",
        "--state",
        path(&state),
        "--seed",
        "1",
        "--out",
        path(&log),
    ]);
    assert_eq!(code, 0);
    let mut text = std::fs::read_to_string(&state).unwrap();
    text.push('\n');
    std::fs::write(&state, text).unwrap();
    let manifest = dir.path().join("log.json.manifest.json");
    let (code, _, err) = run(&["replay", "--manifest", path(&manifest), "--out", path(&log)]);
    assert_eq!(code, 1);
    assert!(err.contains("changed"), "{err}");
}

#[test]
fn analyze_and_frontier_on_recorded_log() {
    let log = golden_dir().join("simulate_seed42.json");
    let (code, out, _) = run(&["--json", "analyze", "--log", path(&log)]);
    assert_eq!(code, 0);
    let got: serde_json::Value = serde_json::from_str(&out).unwrap();
    let want: serde_json::Value =
        serde_json::from_slice(&std::fs::read(golden_dir().join("analyze_expected.json")).unwrap())
            .unwrap();
    assert_eq!(got, want);

    let (code, out, _) = run(&["analyze", "--log", path(&log)]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 6);
    assert!(
        out.lines().nth(2).unwrap().contains("0.104465    0.479593"),
        "{out}"
    );

    let (code, out, _) = run(&["--json", "frontier", "--log", path(&log)]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let idx: Vec<u64> = v["frontier"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["index"].as_u64().unwrap())
        .collect();
    assert_eq!(idx, [0, 2, 3, 4, 1]);
    assert_eq!(v["most_balanced"], 0);
    let (code, _, _) = run(&["frontier", "--log", path(&log), "--s-target", "0"]);
    assert_eq!(code, 1);
}

#[test]
fn compare_writes_csv_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cmp.csv");
    let state = data_dir().join("midfield.json");
    let (code, out, err) = run(&[
        "compare",
        "--state",
        path(&state),
        "--styles",
        "3:1,1:3,2:2",
        "--trials",
        "200",
        "--seed",
        "7",
        "--csv",
        path(&csv),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), 4);
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "style,class,trials,mean_efficiency,mean_security,goal_rate,mean_length"
    );
    assert!(lines[1].starts_with("3:1,Possession,200,"));
    assert!(lines[2].starts_with("1:3,Direct,200,"));
    assert!(lines[3].starts_with("2:2,Balanced,200,"));

    let again = dir.path().join("again.csv");
    let manifest = dir.path().join("cmp.csv.manifest.json");
    assert_eq!(
        run(&[
            "replay",
            "--manifest",
            path(&manifest),
            "--out",
            path(&again)
        ])
        .0,
        0
    );
    assert_eq!(std::fs::read_to_string(again).unwrap(), text);
}

#[test]
fn config_file_changes_behaviour() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fournet.toml");
    std::fs::write(&cfg, "[simulation]\nthreshold = 0.05\n").unwrap();
    let state = data_dir().join("test_state.json");
    let (code, out, _) = run(&["--config", path(&cfg), "decide", "--state", path(&state)]);
    assert_eq!(code, 0);
    assert!(out.contains("decision: shoot"), "{out}");

    std::fs::write(&cfg, "[simulation]\nthreshold = 2\n").unwrap();
    assert_eq!(
        run(&["--config", path(&cfg), "decide", "--state", path(&state)]).0,
        1
    );
    std::fs::write(&cfg, "[estimators]\nbogus = 1\n").unwrap();
    assert_eq!(
        run(&["--config", path(&cfg), "decide", "--state", path(&state)]).0,
        1
    );
}

#[test]
fn binary_reads_config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fournet.toml");
    std::fs::write(&cfg, "[simulation]\nthreshold = 0.05\n").unwrap();
    let state = data_dir().join("test_state.json");
    let out = Command::new(env!("CARGO_BIN_EXE_fournet"))
        .args(["decide", "--state", path(&state)])
        .env("FOURNET_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("decision: shoot"));

    let out = Command::new(env!("CARGO_BIN_EXE_fournet"))
        .args(["decide"])
        .env_remove("FOURNET_CONFIG")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}
