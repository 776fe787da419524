//! End-to-end runs of the `horolab` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horolab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    v
}

#[test]
fn construct_gives_the_two_two_pade_section() {
    let efn = data("efn.json");
    let v = json_ok(&["construct", "--system", &efn, "--degree", "2", "--points", "0", "--order", "5"]);
    let c = &v["report"]["construction"];
    assert_eq!(c["section"]["components"], serde_json::json!([["-12", "-6", "-1"], ["12", "-6", "1"]]));
    assert_eq!(c["achieved_orders"], serde_json::json!([5]));
    assert_eq!(v["manifest"]["parameters"]["order"], 5);
    assert_eq!(v["manifest"]["inputs"][0], efn);
}

#[test]
fn growth_writes_csv_with_manifest_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let r = run(&["growth", "--map", "exp", "--rmax", "100", "--out", out]);
    assert!(r.status.success());
    let csv = std::fs::read_to_string(dir.path().join("growth.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(header["manifest"]["parameters"]["rmax"], 100.0);
    assert_eq!(lines.next().unwrap(), "r,T,N,m,residual,mass");
    assert_eq!(lines.count(), 25);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("growth.json")).unwrap()).unwrap();
    let rho = v["report"]["suite"]["rho"]["rho"].as_f64().unwrap();
    assert!((rho - 1.0).abs() < 0.05, "rho = {rho}");
    assert!(v["report"]["residual_spread"].as_f64().unwrap() < 0.1);
}

#[test]
fn example_family_verdicts() {
    let v = json_ok(&["example-1-3", "--a", "1/2", "--b", "1/3", "--c", "1", "--x0", "1", "--x1", "2"]);
    let c = &v["report"]["corrected"];
    assert_eq!(c["integrability"], "PASS");
    assert_eq!(c["basis"], "PASS");
    assert_eq!(c["conjugacy"], "PASS");
    assert!(c["conjugacy_residual"].as_f64().unwrap() <= 1e-6);
    let p = &v["report"]["as_printed"];
    assert_eq!(p["integrability"], "FAIL");
    assert_eq!(p["conjugacy"], "FAIL");
}

#[test]
fn isomono_reads_family_and_basis_files() {
    let v = json_ok(&[
        "isomono",
        "--family",
        &data("corrected_family.json"),
        "--basis",
        &data("corrected_basis.json"),
        "--precision",
        "20",
    ]);
    assert_eq!(v["report"]["basis"], "PASS");
    assert_eq!(v["report"]["conjugacy"], "PASS");
    assert_eq!(v["manifest"]["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn zero_lemma_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&["zero-lemma", "--system", &data("efn.json"), "--degrees", "2:4", "--out", dir.path().to_str().unwrap()]);
    assert!(r.status.success());
    let csv = std::fs::read_to_string(dir.path().join("zero-lemma.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(2).collect();
    assert_eq!(rows, ["2,2,5,1,true,0 1", "3,2,7,1,true,0 1", "4,2,9,1,true,0 1"]);
}

#[test]
fn certify_refutes_type_one_for_squared_factorials() {
    let v = json_ok(&["certify-lg", "--germ", "inv-factorial-sq", "--alpha", "1", "--truncation", "200"]);
    let sums: Vec<f64> = v["report"]["slope_profile"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["slope_sum"].as_f64().unwrap())
        .collect();
    assert_eq!(sums.len(), 3);
    assert!(sums.windows(2).all(|w| w[1] > w[0]));
    let v = json_ok(&["certify-lg", "--germ", "inv-factorial-sq", "--alpha", "2", "--truncation", "200"]);
    assert_eq!(v["report"]["certificate"]["bad_primes"], serde_json::json!([]));
}

#[test]
fn independence_is_deterministic() {
    let args = ["independence", "--values", "e,exp(2)", "--degree", "2", "--precision", "120"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["report"]["search"]["relation_text"], "y1^2 - y2");
}

#[test]
fn errors_are_json_with_nonzero_exit() {
    let r = run(&["solve", "--system", "/nonexistent/system.json"]);
    assert!(!r.status.success());
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "input");
    assert_eq!(v["manifest"]["subcommand"], "solve");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"rank": 1, "matrix": [["1/(z-"]]}"#).unwrap();
    let r = run(&["solve", "--system", bad.to_str().unwrap()]);
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "Parse");

    let r = run(&["independence", "--values", "e,pi", "--degree", "3", "--height", "1000000", "--precision", "30"]);
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "InconclusiveSearch");
}

#[test]
fn thread_cap_is_validated() {
    let r = Command::new(env!("CARGO_BIN_EXE_horolab"))
        .args(["growth", "--rmax", "100", "--samples", "256"])
        .env("HOROLAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(r.status.success());
    let r = Command::new(env!("CARGO_BIN_EXE_horolab"))
        .args(["growth", "--rmax", "100"])
        .env("HOROLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert!(!r.status.success());
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "configuration");
}
