use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tradeoff")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn solve_static_prints_four_decimals() {
    let out = run(&["solve", &scenario("appendix2.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("0.8575"), "{text}");
    assert!(text.contains("5.1450"), "{text}");
    assert!(text.contains("1.166e12"), "{text}");
    assert!(text.contains("passed"), "{text}");
    assert!(!text.contains("oracle"), "{text}");
}

#[test]
fn solve_verify_reports_oracle_gap() {
    let out = run(&["solve", &scenario("appendix2.json"), "--verify", "--oracle-points", "1000", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["diagnostics"]["oracle"]["n_points"], 1000);
    assert!(v["diagnostics"]["oracle"]["gap"].as_f64().unwrap() >= 0.0);
}

#[test]
fn oracle_points_require_verify() {
    let out = run(&["solve", &scenario("appendix2.json"), "--oracle-points", "1000"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_dynamic_prints_both_periods() {
    let out = run(&["solve", &scenario("appendix3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for want in ["1.3904", "2.2352", "0.0274", "0.8179", "3.632e12", "1.7000", "81.6993"] {
        assert!(text.contains(want), "missing {want} in\n{text}");
    }
}

#[test]
fn solve_chain_lists_every_constraint() {
    let out = run(&["solve", &scenario("chain3.json"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["solution"]["entries"].as_array().unwrap().len(), 3);
    assert_eq!(v["horizon"], 4);
}

#[test]
fn trace_file_has_frontier_optimum_and_tangent() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("plot.csv");
    let out = run(&["solve", &scenario("appendix3.json"), "--trace", "50", "--trace-out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("series,theta,lives,jobs,z"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 5));
    for label in ["constraint1", "constraint2"] {
        let count = |s: &str| rows.iter().filter(|r| r[0] == format!("{label}.{s}")).count();
        assert_eq!((count("frontier"), count("optimum"), count("tangent")), (50, 1, 2));
    }
}

#[test]
fn trace_defaults_next_to_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("s.json");
    std::fs::copy(scenario("appendix2.json"), &copy).unwrap();
    let out = run(&["solve", copy.to_str().unwrap(), "--trace", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("s.trace.csv").exists());
}

#[test]
fn trace_write_failure_is_io_error() {
    let out = run(&["solve", &scenario("appendix2.json"), "--trace", "3", "--trace-out", "/nonexistent/dir/t.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn enumerate_marks_argmax() {
    let out = run(&["enumerate", &scenario("appendix1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("argmax: point 5 (0.8000, 6.0000), Z = 1.160e12"), "{text}");
    for z in ["6.000e11", "7.880e11", "9.520e11", "1.080e12", "1.160e12", "1.000e12"] {
        assert!(text.contains(z), "missing {z}");
    }
}

#[test]
fn sensitivity_to_c_matches_multiplier() {
    let out = run(&["sensitivity", &scenario("appendix2.json"), "--param", "c", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["d_z"].as_f64().unwrap() / 5.831e4 - 1.0).abs() < 1e-3);
}

#[test]
fn sensitivity_rejects_unknown_parameter() {
    let out = run(&["sensitivity", &scenario("appendix2.json"), "--param", "z"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown parameter"));
}

#[test]
fn infer_recovers_ratio() {
    let out = run(&["infer", &scenario("observed.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("16.6667"));
}

#[test]
fn wrong_kind_is_validation_error() {
    let out = run(&["enumerate", &scenario("appendix2.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("discrete"));
    let out = run(&["solve", &scenario("appendix1.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_file_names_the_field() {
    let out = run(&["solve", &scenario("invalid_negative_a.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("frontier.a"), "{}", stderr(&out));
}

#[test]
fn unknown_field_is_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = std::fs::read_to_string(scenario("appendix2.json")).unwrap().replacen("\"c\": 10", "\"c\": 10, \"d\": 1", 1);
    std::fs::write(&path, text).unwrap();
    let out = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("payload.frontier.d"), "{}", stderr(&out));
}

#[test]
fn missing_file_is_io_error() {
    let out = run(&["solve", "/nonexistent/scenario.json"]);
    assert_eq!(out.status.code(), Some(3));
}
