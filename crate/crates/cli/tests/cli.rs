use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn gclkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gclkit")).args(args).output().expect("binary runs")
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn stderr_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.lines().last().expect("error line")).expect("json error line")
}

#[test]
fn trimap_on_case1_is_exact() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("c1.csv");
    let out = gclkit(&["run", "--case", "1", "--methods", "trimap", "--n", "1..5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&path).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header.split(',').count(), 12);
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 5);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r[0], "case1");
        assert_eq!(r[1], "TRI-MAP");
        assert_eq!(r[2], (i + 1).to_string());
        assert_eq!(r[3], (2 * i + 3).to_string());
        assert!(r[4].is_empty() && r[11].is_empty());
        assert!(r[5].parse::<f64>().unwrap() <= 1e-12);
    }
}

fn run_case4(path: &Path) -> String {
    let out = gclkit(&[
        "run", "--case", "4", "--seed", "42", "--methods", "aevi,avg", "--n", "1..3", "--mesh", "4,4,4", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn case4_output_is_reproducible() {
    let dir = tempdir().unwrap();
    let a = run_case4(&dir.path().join("a.csv"));
    let b = run_case4(&dir.path().join("b.csv"));
    assert_eq!(a, b);
    assert!(a.contains("# seed: 42"));
    assert_eq!(data_rows(&a).len(), 6);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "case = \"case2\"\nmethods = [\"avg\"]\nn = \"1..4\"\nmesh = [3, 3, 3]\nalpha0 = 0.05\n").unwrap();
    let out = gclkit(&["run", "--config", cfg.to_str().unwrap(), "--n", "2..3"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.contains("# alpha0: 0.05"));
    assert!(csv.contains("# harmonics: 2..3"));
    assert_eq!(data_rows(&csv).len(), 2);
}

#[test]
fn freestream_column_is_filled_when_requested() {
    let out = gclkit(&[
        "run", "--case", "2", "--methods", "aevi", "--n", "2", "--mesh", "3,3,3", "--freestream", "on", "--max-iters",
        "50",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.contains("# rk_alpha: 0.25,"));
    let rows = data_rows(&csv);
    assert!(rows[0][4].parse::<f64>().unwrap() <= 1e-8);
}

#[test]
fn exit_codes() {
    let bad_flag = gclkit(&["run", "--case", "1", "--radius", "0.1", "--n", "1"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    assert_eq!(stderr_json(&bad_flag)["error"], "config");

    let unknown = gclkit(&["run", "--case", "case9", "--n", "1"]);
    assert_eq!(unknown.status.code(), Some(2));

    let degenerate = gclkit(&["run", "--case", "3", "--radius", "0.5", "--n", "1", "--mesh", "4,4,4"]);
    assert_eq!(degenerate.status.code(), Some(3));
    assert_eq!(stderr_json(&degenerate)["exit_code"], 3);

    let diverged = gclkit(&[
        "run", "--case", "2", "--methods", "avg", "--n", "2", "--mesh", "3,3,3", "--freestream", "on", "--cfl", "50",
    ]);
    assert_eq!(diverged.status.code(), Some(4));
    assert_eq!(stderr_json(&diverged)["error"], "divergence");

    let io = gclkit(&["run", "--case", "1", "--n", "1", "--mesh", "2,2,2", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(io.status.code(), Some(1));
    assert_eq!(stderr_json(&io)["error"], "io");
}

#[test]
fn verify_catches_the_mutation() {
    let ok = gclkit(&["verify", "--samples", "50"]);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = gclkit(&["verify", "--samples", "50", "--mutate-trimap"]);
    assert!(!bad.status.success());
    let text = String::from_utf8(bad.stdout).unwrap();
    let failed: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].contains("trilinear closure"));
}
