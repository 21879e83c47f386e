use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_coarsehyp"));
    c.env_remove("COARSEHYP_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn delta_on_the_tree_is_zero() {
    let out = run(&["delta", "f2tree", "--depth", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["suite"], "delta");
    assert_eq!(r["verdicts"][0]["constants"]["delta_hat"], 0.0, "{r}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["delta", "sphere"][..],
        &["delta", "f2tree", "--depth", "10"],
        &["frobnicate"],
        &["probe", "example8", "--check", "nonsense"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn violated_check_exits_one_with_a_witness() {
    let out = run(&["probe", "comb", "--check", "visual"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let v = &r["verdicts"][0];
    assert_eq!(v["pass"], false);
    assert!(!v["witnesses"].as_array().unwrap().is_empty(), "{v}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("fail"));
}

#[test]
fn flags_override_the_config_file() {
    let cfg = tmp("depth2.json");
    std::fs::write(&cfg, r#"{"depth": 2, "seed": 11}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = json(&run(&["delta", "f2tree", "--config", c]));
    assert_eq!(from_file["config"]["depth"], 2);
    assert_eq!(from_file["config"]["seed"], 11);
    let flagged = json(&run(&["delta", "f2tree", "--config", c, "--depth", "3"]));
    assert_eq!(flagged["config"]["depth"], 3);
    assert_eq!(flagged["config"]["seed"], 11);

    let bad = tmp("bad.json");
    std::fs::write(&bad, r#"{"depht": 2}"#).unwrap();
    assert_eq!(run(&["delta", "f2tree", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn render_writes_deterministic_svg() {
    let a = tmp("fig-a.svg");
    let b = tmp("fig-b.svg");
    for p in [&a, &b] {
        let out = run(&["render", "figure2", "--depth", "3", "--no-timestamp", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let svg = std::fs::read_to_string(&a).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());
    let stamped = run(&["render", "figure1", "--depth", "2"]);
    assert!(String::from_utf8_lossy(&stamped.stdout).contains("unix "));
}

#[test]
fn merged_reports_keep_every_verdict() {
    let a = tmp("delta-tree.json");
    let b = tmp("delta-comb.json");
    assert_eq!(run(&["delta", "f2tree", "--depth", "3", "--out", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(run(&["probe", "comb", "--check", "visual", "--out", b.to_str().unwrap()]).status.code(), Some(1));
    let out = run(&["report", "--merge", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdicts"].as_array().unwrap().len(), 2);
    let missing = tmp("missing.json");
    assert_eq!(run(&["report", "--merge", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn thread_count_is_validated() {
    let out = bin().env("COARSEHYP_THREADS", "abc").args(["delta", "f2tree", "--depth", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().env("COARSEHYP_THREADS", "2").args(["delta", "f2tree", "--depth", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
