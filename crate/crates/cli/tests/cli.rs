use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ncforms(args: &[&str]) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ncforms"));
    c.args(args).env_remove("NCFORMS_CACHE");
    c
}

fn run(args: &[&str]) -> Output {
    ncforms(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout).expect("valid JSON on stdout");
    (out.status.code().unwrap(), v)
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn hilbert_s3() {
    let (code, v) = json(&["hilbert", "--n", "3", "--class", "2", "--max-degree", "9"]);
    assert_eq!(code, 0);
    assert_eq!(strings(&v["results"]["dims"]), ["1", "3", "4", "3", "1", "0", "0", "0", "0", "0"]);
    assert_eq!(v["results"]["total"], "12");
    assert_eq!(v["passed"], true);
    assert_eq!(v["schema"], "ncforms-report/1");
}

#[test]
fn flat_s5_strata() {
    let (code, v) = json(&["flat", "--n", "5", "--class", "2", "--decompose"]);
    assert_eq!(code, 0);
    let strata = v["results"]["strata"].as_array().unwrap();
    let counts: Vec<&str> = strata.iter().map(|s| s["count"].as_str().unwrap()).collect();
    assert_eq!(counts, ["1", "5", "10", "10", "15", "10", "1"]);
    let f6 = strata.iter().find(|s| s["cardinality"] == "6").unwrap();
    assert_eq!(f6["module"]["label"], "fund");
    assert_eq!(f6["sets"].as_array().unwrap().len(), 5);
}

#[test]
fn memory_cap_refuses() {
    let out = run(&["hilbert", "--n", "3", "--class", "2", "--max-degree", "99", "--mem-limit", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bytes"));
}

#[test]
fn degree_cap_refuses_with_estimate() {
    let out = run(&["cohomology", "--n", "5", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("estimated working set"));
}

#[test]
fn usage_errors() {
    for args in [
        vec!["check", "--suite", "nope"],
        vec!["hilbert", "--n", "4", "--class", "7"],
        vec!["hilbert", "--n", "4", "--class", "3", "--signed"],
        vec!["frobnicate"],
        vec!["hilbert", "--n", "1"],
        vec!["fourier"],
        vec!["derive", "--n", "3", "--a", "(123)", "--element", "[12]"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn exit_code_follows_assertions() {
    for args in [vec!["fourier", "--e3"], vec!["killing", "--n", "5"], vec!["relations", "--n", "4", "--class", "3"]] {
        let (code, v) = json(&args);
        let passed = v["passed"].as_bool().unwrap();
        let all = v["assertions"].as_array().unwrap().iter().all(|a| a["passed"] == true);
        assert_eq!(passed, all);
        assert_eq!(code, if passed { 0 } else { 1 }, "{args:?}");
    }
}

#[test]
fn numbers_are_strings() {
    fn walk(v: &Value) {
        match v {
            Value::Number(_) => panic!("bare number in report"),
            Value::Array(a) => a.iter().for_each(walk),
            Value::Object(o) => o.values().for_each(walk),
            _ => {}
        }
    }
    for args in [vec!["killing", "--n", "4"], vec!["metric-det", "--n", "4", "--samples", "3"], vec!["hodge", "--s3"]] {
        walk(&json(&args).1);
    }
}

#[test]
fn derivative() {
    let (code, v) = json(&["derive", "--n", "3", "--signed", "--a", "(12)", "--element", "[12][23]"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["result"], "[23]");
    let (_, v) = json(&["derive", "--n", "3", "--signed", "--a", "(12)", "--element", "[23][12]"]);
    assert_eq!(v["results"]["result"], "0");
    let (_, v) = json(&["derive", "--n", "3", "--signed", "--a", "(12)", "--element", "[23][12]", "--bar"]);
    assert_eq!(v["results"]["result"], "[13]");
}

#[test]
fn json_is_deterministic_across_threads() {
    let args = ["--json", "check", "--suite", "tables", "--seed", "7"];
    let a = ncforms(&args).env("RAYON_NUM_THREADS", "1").output().unwrap();
    let b = ncforms(&args).env("RAYON_NUM_THREADS", "4").output().unwrap();
    let c = ncforms(&args).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

fn cached_files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(dir)
        .map(|d| d.map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect())
        .unwrap_or_default();
    v.sort();
    v
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--json", "hilbert", "--n", "4", "--cache-dir", d];
    let first = ncforms(&args).output().unwrap();
    assert_eq!(first.status.code(), Some(0));
    let files = cached_files(dir.path());
    assert_eq!(files.len(), 3, "{files:?}");
    assert!(files.iter().all(|f| f.starts_with("alg-n4-c2-unsigned-quadratic-d")));
    let second = ncforms(&args).output().unwrap();
    let r1: Value = serde_json::from_slice(&first.stdout).unwrap();
    let r2: Value = serde_json::from_slice(&second.stdout).unwrap();
    assert_eq!(r1["results"], r2["results"]);
    assert_eq!(first.stdout, second.stdout);

    // a different flavor writes its own files
    let w = ncforms(&["--json", "hilbert", "--n", "4", "--woronowicz", "--cache-dir", d]).output().unwrap();
    let rw: Value = serde_json::from_slice(&w.stdout).unwrap();
    assert_eq!(rw["results"]["dims"], r1["results"]["dims"]);
    assert_eq!(cached_files(dir.path()).len(), 6);
}

#[test]
fn env_overrides_cache_dir() {
    let flag = tempfile::tempdir().unwrap();
    let env = tempfile::tempdir().unwrap();
    let out = ncforms(&["relations", "--n", "4", "--cache-dir", flag.path().to_str().unwrap()])
        .env("NCFORMS_CACHE", env.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(cached_files(flag.path()).is_empty());
    assert_eq!(cached_files(env.path()), ["alg-n4-c2-unsigned-quadratic-d2.json"]);
}
