use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn lincomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lincomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn array_file(dir: &TempDir, name: &str, periods: &[usize], data: &[u32]) -> PathBuf {
    let path = dir.path().join(name);
    let body = serde_json::json!({"field": {"p": 2, "e": 1}, "periods": periods, "data": data});
    std::fs::write(&path, body.to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_of(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(o));
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn complexity_of_checkerboard() {
    let dir = TempDir::new().unwrap();
    let f = array_file(&dir, "cb.json", &[2, 2], &[1, 0, 0, 1]);
    let v = json_of(&lincomp(&["complexity", s(&f), "--json"]));
    assert_eq!(v["complexity"], 2);
    assert_eq!(v["basis"], serde_json::json!(["X1 + X2", "X2^2 + 1"]));
    assert_eq!(v["delta"], serde_json::json!([[0, 0], [0, 1]]));
    assert_eq!(v["order"], "grlex");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));

    let text = lincomp(&["complexity", s(&f)]);
    assert_eq!(text.status.code(), Some(0));
    assert!(stdout(&text).contains("L = 2"));
    assert!(stdout(&text).contains("X2^2 + 1"));
}

#[test]
fn complexity_of_zero_array() {
    let dir = TempDir::new().unwrap();
    let f = array_file(&dir, "zero.json", &[3, 2], &[0; 6]);
    let v = json_of(&lincomp(&["complexity", s(&f), "--json", "--order", "lex"]));
    assert_eq!(v["complexity"], 0);
    assert_eq!(v["basis"], serde_json::json!(["1"]));
    assert_eq!(v["delta"], serde_json::json!([]));
}

#[test]
fn wrong_data_length_is_a_format_error() {
    let dir = TempDir::new().unwrap();
    let f = array_file(&dir, "bad.json", &[2, 2], &[1, 0, 0]);
    let o = lincomp(&["complexity", s(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("data length 3"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(lincomp(&["bogus"]).status.code(), Some(1));
    assert_eq!(lincomp(&["complexity"]).status.code(), Some(1));
    assert_eq!(lincomp(&["complexity", "x.json", "--order", "revlex"]).status.code(), Some(1));
    assert_eq!(lincomp(&["complexity", "x.json", "--json", "--text"]).status.code(), Some(1));
    assert_eq!(lincomp(&["--version"]).status.code(), Some(0));
}

#[test]
fn missing_input_is_a_data_error() {
    let o = lincomp(&["complexity", "/nonexistent/array.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn kerror_of_impulse() {
    let dir = TempDir::new().unwrap();
    let f = array_file(&dir, "imp.json", &[2, 2], &[1, 0, 0, 0]);
    let v = json_of(&lincomp(&["kerror", s(&f), "--k", "1", "--mode", "exact", "--json"]));
    assert_eq!(v["value"], 0);
    assert_eq!(v["profile"], serde_json::json!([4, 0]));
    assert_eq!(v["witness"]["data"], serde_json::json!([0, 0, 0, 0]));
    assert_eq!(v["seed"], 0);
}

#[test]
fn kerror_zero_matches_complexity() {
    let dir = TempDir::new().unwrap();
    let f = array_file(&dir, "a.json", &[3, 2], &[1, 1, 0, 1, 0, 0]);
    let k0 = json_of(&lincomp(&["kerror", s(&f), "--k", "0", "--json"]));
    let l = json_of(&lincomp(&["complexity", s(&f), "--json"]));
    assert_eq!(k0["value"], l["complexity"]);
}

#[test]
fn kerror_over_budget_exits_three_with_ball_size() {
    let dir = TempDir::new().unwrap();
    let data: Vec<u32> = (0..16).map(|i| (i % 3 == 0) as u32).collect();
    let f = array_file(&dir, "big.json", &[4, 4], &data);
    // sum_{i <= 3} C(16, i) = 1 + 16 + 120 + 560
    let o = lincomp(&["kerror", s(&f), "--k", "3", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("697"), "{}", stderr(&o));
}

#[test]
fn kerror_sampled_is_seeded() {
    let dir = TempDir::new().unwrap();
    let data: Vec<u32> = (0..16).map(|i| (i % 3 == 0) as u32).collect();
    let f = array_file(&dir, "big.json", &[4, 4], &data);
    let args = ["kerror", s(&f), "--k", "3", "--mode", "sampled", "--budget", "200", "--seed", "9", "--json"];
    let a = lincomp(&args);
    let b = lincomp(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["seed"], 9);
}

#[test]
fn fold_of_coprime_periods() {
    let dir = TempDir::new().unwrap();
    let f = array_file(&dir, "s.json", &[2, 3], &[0, 0, 0, 1, 1, 1]);
    let out = dir.path().join("t.json");
    let v = json_of(&lincomp(&["fold", s(&f), "--out", s(&out), "--json"]));
    assert_eq!(v["folded"]["data"], serde_json::json!([0, 1, 0, 1, 0, 1]));
    assert_eq!(v["complexity_array"], 2);
    assert_eq!(v["complexity_folded"], 2);
    assert_eq!(v["bound_holds"], true);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written["periods"], serde_json::json!([6]));
}

#[test]
fn fold_of_one_dimensional_input_is_identity() {
    let dir = TempDir::new().unwrap();
    let f = array_file(&dir, "s.json", &[5], &[1, 1, 0, 1, 0]);
    let v = json_of(&lincomp(&["fold", s(&f), "--json"]));
    assert_eq!(v["folded"]["data"], serde_json::json!([1, 1, 0, 1, 0]));
    assert_eq!(v["complexity_array"], v["complexity_folded"]);
}

#[test]
fn fold_rejects_common_factors() {
    let dir = TempDir::new().unwrap();
    let f = array_file(&dir, "cb.json", &[2, 2], &[1, 0, 0, 1]);
    assert_eq!(lincomp(&["fold", s(&f)]).status.code(), Some(2));
}

#[test]
fn census_counts_partitions() {
    let o = lincomp(&["census", "--n", "2", "--kmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let counts: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(counts, ["1", "2", "3", "5", "7"]);

    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("c.csv");
    let o = lincomp(&["census", "--n", "2", "--kmax", "5", "--csv", s(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), text);
}

#[test]
fn census_beyond_limits_is_a_budget_error() {
    assert_eq!(lincomp(&["census", "--n", "2", "--kmax", "40"]).status.code(), Some(3));
    assert_eq!(lincomp(&["census", "--n", "0", "--kmax", "3"]).status.code(), Some(1));
}

#[test]
fn random_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = lincomp(&["random", "--p", "2", "--e", "1", "--periods", "4,4", "--seed", "7", "--out", s(out)]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("seed 7"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = dir.path().join("c.json");
    let o = lincomp(&["random", "--p", "2", "--periods", "4,4", "--out", s(&c)]);
    assert!(stdout(&o).contains("seed 0"));
}

#[test]
fn random_over_extension_field() {
    let o = lincomp(&["random", "--p", "2", "--e", "2", "--modulus", "1,1,1", "--periods", "3,2", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["field"]["modulus"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["data"].as_array().unwrap().len(), 6);
    let reducible = lincomp(&["random", "--p", "2", "--e", "2", "--modulus", "1,0,1", "--periods", "3"]);
    assert_eq!(reducible.status.code(), Some(2));
}

fn lower_config(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("lower.json");
    std::fs::write(
        &path,
        r#"{"experiment":"lower","field":{"p":2,"e":1},"periods":[2,2],"trials":1,"epsilon1":0.75,"mode":"exhaustive"}"#,
    )
    .unwrap();
    path
}

#[test]
fn exhaustive_lower_bound_experiment() {
    let dir = TempDir::new().unwrap();
    let cfg = lower_config(&dir);
    let report = dir.path().join("r.json");
    let o = lincomp(&["experiment", "--config", s(&cfg), "--report", s(&report)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["empirical_probability"], 0.875);
    assert_eq!(v["threshold_h"], 1);
    assert_eq!(v["samples"], 16);
    assert_eq!(v["config"]["seed"], 0);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn experiment_reports_are_byte_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("upper.json");
    std::fs::write(
        &cfg,
        r#"{"experiment":"upper","field":{"p":2,"e":1},"periods":[4,4],"trials":300,"seed":11,"mode":"montecarlo"}"#,
    )
    .unwrap();
    let mut reports = Vec::new();
    for workers in ["1", "3"] {
        let out = dir.path().join(format!("r{workers}.json"));
        let o = lincomp(&["experiment", "--config", s(&cfg), "--report", s(&out), "--workers", workers]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        reports.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn experiment_config_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"experiment":"lower","periods":[2,2]}"#).unwrap();
    assert_eq!(lincomp(&["experiment", "--config", s(&cfg)]).status.code(), Some(2));
    std::fs::write(
        &cfg,
        r#"{"experiment":"lower","field":{"p":2,"e":1},"periods":[8,8],"trials":1,"mode":"exhaustive"}"#,
    )
    .unwrap();
    assert_eq!(lincomp(&["experiment", "--config", s(&cfg)]).status.code(), Some(3));
}
