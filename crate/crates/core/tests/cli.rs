use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn billiard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_billiard")).args(args).env_remove("BILLIARD_TOL").output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = billiard(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("billiard-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn stability_of_fagnano() {
    let v = ok_json(&["stability", "--word", "1,2,3,1,2,3"]);
    assert_eq!(v["stable"], json!(true));
    assert_eq!(v["winding"], json!([0, 0, 0]));
    assert_eq!(v["relation"], Value::Null);
}

#[test]
fn stability_relation() {
    let v = ok_json(&["stability", "--word", "1,2,1,2"]);
    assert_eq!(v["stable"], json!(false));
    assert_eq!(v["relation"], json!([0, 0, 4]));
}

#[test]
fn seeded_sampling_is_reproducible() {
    let args = ["--seed", "11", "stability", "--word", "1,2,3,1,2,3", "--sample", "30"];
    let a = billiard(&args);
    let b = billiard(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["sampled"]["triangles"], json!(30));
    assert!(v["sampled"]["periodic"].as_u64().unwrap() <= 30);
}

#[test]
fn veechscan_short_cycles() {
    let v = ok_json(&["veechscan", "--n", "8", "--max-components", "7"]);
    assert_eq!(v, json!({"surviving": []}));
    let v = ok_json(&["veechscan", "--n", "8", "--max-components", "7", "--include-obstructed"]);
    assert_eq!(v["surviving"], json!([]));
    assert_eq!(v["obstructed"][0]["components"], json!(["L7", "L5", "L7", "R5"]));
}

#[test]
fn unfold_and_tile() {
    let v = ok_json(&["unfold", "--word", "1,2,3,1,2,3", "--shape", "equilateral"]);
    assert_eq!(v["class"], json!("periodic"));
    let svg = scratch("tile.svg");
    let v = ok_json(&["tile", "--word", "1,2,3,1,2,3", "--resolution", "8", "--svg", svg.to_str().unwrap()]);
    assert_eq!(v["counts"], json!({"infeasible": 36, "periodic": 28, "saddle": 0}));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn probe_outcomes() {
    let v = ok_json(&["probe", "--word", "1,2,3,1,2,3", "--direction", "7/4 pi"]);
    assert_eq!(v, json!({"result": "all-excluded"}));
    let v = ok_json(&["probe", "--word", "1,2,3,1,2,3", "--direction", "1/2 pi"]);
    assert_eq!(v["result"], json!("hit"));
    assert_eq!(v["samples"].as_array().unwrap().len(), 12);
}

#[test]
fn classify3060_and_sj() {
    let v = ok_json(&["classify3060", "--vector", "1,2"]);
    assert_eq!(v["g"], json!([1, 0, 2, 1]));
    assert_eq!(v["parity"], json!([1, 0]));
    let v = ok_json(&["sj", "--j-max", "2"]);
    assert_eq!(v["cycles"].as_array().unwrap().len(), 2);
    assert_eq!(v["cycles"][0]["components"], json!(["L3", "L1", "R-1", "L-3", "L-1", "R1"]));
}

#[test]
fn input_document() {
    let doc = r#"{"n": 3, "angles": [1.0, 1.0], "word": [1, 2, 3, 1, 2, 3]}"#;
    let v = ok_json(&["--input", doc, "unfold"]);
    assert_eq!(v["class"], json!("periodic"));
    let path = scratch("input.json");
    std::fs::write(&path, doc).unwrap();
    let w = ok_json(&["--input", path.to_str().unwrap(), "unfold"]);
    assert_eq!(v, w);
}

#[test]
fn output_file() {
    let path = scratch("out.json");
    let out = billiard(&["--output", path.to_str().unwrap(), "stability", "--word", "1,2,3,1,2,3"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["stable"], json!(true));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(billiard(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(billiard(&["--tol", "-1", "stability", "--word", "1,2"]).status.code(), Some(2));
    assert_eq!(billiard(&["--threads", "0", "sj"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_billiard"))
        .args(["stability", "--word", "1,2"])
        .env("BILLIARD_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_billiard"))
        .args(["unfold", "--word", "1,2,3,1,2,3", "--shape", "equilateral"])
        .env("BILLIARD_TOL", "1e-6")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn domain_errors_exit_1() {
    for args in [
        vec!["stability", "--word", "1,1,2"],
        vec!["stability", "--word", "1,4"],
        vec!["veechscan", "--n", "6", "--max-components", "4"],
        vec!["classify3060", "--vector", "2,4"],
    ] {
        let out = billiard(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let v: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert!(v["error"]["kind"].is_string(), "{v}");
        assert!(v["error"]["message"].is_string());
    }
}
