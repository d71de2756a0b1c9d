use std::path::Path;
use std::process::{Command, Output};

use leonav::io::{parse_scenario, read_json, KeyPolicy, Payload};

const SMALL: &str = r#"{
  "grid": {"sites": 120},
  "window": {"duration_s": 7200, "step_s": 600},
  "sweep": {
    "sizes": [60, 150],
    "altitudes_km": [900, 1300],
    "optimize_altitude_km": 1200,
    "pdop_target": 4.0,
    "size_ceiling": 400
  }
}"#;

fn leonav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leonav"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .env_remove("LEO_NAV_THREADS")
        .output()
        .expect("spawn leonav")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn jammer_table_shape() {
    let text = stdout(&leonav(&["jammer", "--quiet"]));
    let lines: Vec<&str> = text.split("\r\n").filter(|l| !l.is_empty()).collect();
    assert_eq!(lines.len(), 6);
    for l in &lines {
        assert_eq!(l.split(',').count(), 9, "{l}");
    }
    assert!(lines[0].starts_with("margin_dbhz,tree_canopy,wood_count"));
    assert!(lines[5].starts_with("30,Most,3,2,2,1,1,"));
}

#[test]
fn every_subcommand_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "small.json", SMALL);
    for cmd in [
        "dop-map",
        "dop-sweep",
        "optimize",
        "pathloss",
        "footprint",
        "jammer",
        "power",
        "baseline",
    ] {
        let out_path = dir.path().join(format!("{cmd}.json"));
        let out = leonav(&[
            cmd,
            "--config",
            &config,
            "--format",
            "json",
            "--quiet",
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
        let env = read_json(&std::fs::read(&out_path).unwrap()).unwrap();
        assert_eq!(env.timestamp_utc, "2023-11-14T22:13:20Z");
        assert!(!env.payload.columns().is_empty(), "{cmd}");
    }
}

#[test]
fn json_round_trip_carries_scenario_hash() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "small.json", SMALL);
    let out = leonav(&["dop-sweep", "--config", &config, "--format", "json", "--quiet"]);
    let env = read_json(stdout(&out).as_bytes()).unwrap();
    let scenario = parse_scenario(SMALL, KeyPolicy::Strict).unwrap().scenario;
    assert_eq!(env.scenario_hash, scenario.hash());
    match env.payload {
        Payload::Matrix {
            row_values,
            col_values,
            layers,
            ..
        } => {
            assert_eq!(row_values.len(), 2);
            assert_eq!(col_values, vec![900.0, 1300.0]);
            assert_eq!(layers[0].column.name, "pdop_95");
        }
        other => panic!("unexpected payload {}", other.shape_name()),
    }
}

#[test]
fn series_renders_svg() {
    let text = stdout(&leonav(&["footprint", "--format", "svg", "--quiet"]));
    assert!(text.starts_with("<svg"));
    assert!(text.trim_end().ends_with("</svg>"));
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("planes.json", r#"{"walker": {"planes": 7}}"#, "walker.planes"),
        ("unknown.json", r#"{"walker": {"plnes": 4}}"#, "walker.plnes"),
        ("syntax.json", "{\n  \"grid\": {\"sites\": }\n}", "line 2"),
        ("range.json", r#"{"sweep": {"mask_deg": 95}}"#, "mask"),
    ];
    for (name, text, needle) in cases {
        let config = write_config(dir.path(), name, text);
        let out = leonav(&["baseline", "--config", &config]);
        assert_eq!(out.status.code(), Some(1), "{name}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{name}: {err}");
    }

    let missing = dir.path().join("absent.json");
    let out = leonav(&["power", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = leonav(&["jammer", "--format", "svg"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lenient_keys_warn() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "unknown.json", r#"{"walker": {"plnes": 4}}"#);
    let out = leonav(&["power", "--config", &config, "--lenient"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("walker.plnes"));

    let out = leonav(&["power", "--config", &config, "--lenient", "--quiet"]);
    assert!(out.status.success());
    assert!(out.stderr.is_empty());
}

#[test]
fn write_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing-dir").join("out.csv");
    let out = leonav(&["power", "--quiet", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_env_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "small.json", SMALL);
    let base = leonav(&["dop-map", "--config", &config, "--quiet"]);
    let via_env = Command::new(env!("CARGO_BIN_EXE_leonav"))
        .args(["dop-map", "--config", &config, "--quiet"])
        .env("LEO_NAV_THREADS", "3")
        .output()
        .unwrap();
    assert!(via_env.status.success());
    assert_eq!(stdout(&base), String::from_utf8(via_env.stdout).unwrap());
}
