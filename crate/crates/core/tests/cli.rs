use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn maxavg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxavg")).args(args).output().expect("run maxavg")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const EXAMPLE: &str = r#"{"values": [1.2, 2.3, 3.5, 1.8, 1.6, 2.4, 3, 3.2, 1.1, 2.5]}"#;

#[test]
fn analyze_reports_structure() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "x.json", EXAMPLE);
    let path = path.to_str().unwrap();
    for backend in ["float", "rational"] {
        let out = maxavg(&["--backend", backend, "--format", "json", "analyze", path]);
        assert_eq!(out.status.code(), Some(0));
        let r = json(&out);
        assert_eq!(r["full_maximal_start"], 9);
        assert_eq!(r["majorizing_rotation"], 9);
        assert_eq!(r["table"].as_array().unwrap().len(), 9);
        assert_eq!(r["poset"]["nodes"].as_array().unwrap().len(), 10);
        assert_eq!(r["warnings"].as_array().unwrap().len(), 0);
    }
    let text = maxavg(&["--backend", "rational", "analyze", path]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("poset root: [9:18]"));
    assert!(text.contains("2.375*"));
    let dot = String::from_utf8(maxavg(&["--format", "dot", "analyze", path]).stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 9);
    let csv = String::from_utf8(maxavg(&["--format", "csv", "analyze", path]).stdout).unwrap();
    assert_eq!(csv.lines().count(), 10);
    assert!(csv.starts_with("r,1,2,3,4,5,6,7,8,9,10\n"));
}

#[test]
fn analyze_warns_on_constant_tuple() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "c.json", r#"{"values": [2, 2, 2, 2]}"#);
    let out = maxavg(&["--format", "json", "analyze", "--check-independence", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning: degenerate order"));
    let r = json(&out);
    assert_eq!(r["poset"]["root"], Value::Null);
    assert_eq!(r["distinct_averages"], false);
}

#[test]
fn malformed_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    for body in [r#"{"values": []}"#, r#"{"values": [1, -1]}"#, "{", r#"{"values": [0, 0]}"#] {
        let path = write(&dir, "bad.json", body);
        assert_eq!(maxavg(&["analyze", path.to_str().unwrap()]).status.code(), Some(1), "{body}");
    }
    assert_eq!(maxavg(&["analyze", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(maxavg(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn sums() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(&dir, "x.json", r#"{"values": [1, 2]}"#);
    let r = write(&dir, "r.json", r#"{"radii": [1, 1]}"#);
    let out = maxavg(&["--backend", "rational", "sum", x.to_str().unwrap(), "--radii", r.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!(v["value"], 2.5);
    assert_eq!(v["exact"], "5/2");
    let out = maxavg(&["sum", x.to_str().unwrap(), "--k", "1"]);
    assert_eq!(json(&out)["value"], 2.5);
    let zero = write(&dir, "z.json", r#"{"values": [1, 0, 0]}"#);
    assert_eq!(maxavg(&["sum", zero.to_str().unwrap(), "--k", "1"]).status.code(), Some(1));

    let e = write(&dir, "e.json", EXAMPLE);
    let v = json(&maxavg(&["maxsum", e.to_str().unwrap()]));
    let radii: Vec<u64> = v["radii"].as_array().unwrap().iter().map(|r| r.as_u64().unwrap()).collect();
    assert_eq!(radii, [2, 1, 5, 4, 3, 2, 1, 10, 1, 8]);
    let s = write(&dir, "s.json", r#"{"collections": [[[1], [1, 2, 3]], [[1, 2, 3]], [[1, 2, 3]]]}"#);
    let t = write(&dir, "t.json", r#"{"values": [1, 0.001, 0.001]}"#);
    let v = json(&maxavg(&["maxsum", t.to_str().unwrap(), "--subsets", s.to_str().unwrap()]));
    let value = v["value"].as_f64().unwrap();
    assert!((1.0..=1.006).contains(&value));
}

#[test]
fn minimize() {
    let v = json(&maxavg(&["minimize", "--n", "2"]));
    assert!((v["value"].as_f64().unwrap() - 1.8284271247461903).abs() < 1e-12);
    let v = json(&maxavg(&["minimize", "--p", "1"]));
    assert_eq!(v["value"], 1.0);
    let v = json(&maxavg(&["minimize", "--n", "3", "--oracle"]));
    assert!((v["value"].as_f64().unwrap() - 2.4641016).abs() < 1e-7);
    assert!(v["oracle_gap"].as_f64().unwrap().abs() <= 1e-4);
    assert_eq!(maxavg(&["minimize", "--p", "-1"]).status.code(), Some(1));
    assert_eq!(maxavg(&["minimize", "--n", "9", "--oracle"]).status.code(), Some(1));
    assert_eq!(maxavg(&["--tol", "0", "minimize", "--n", "3"]).status.code(), Some(1));
}

#[test]
fn impossible_tolerance_exits_2() {
    let out = maxavg(&["--tol", "1e-30", "minimize", "--n", "50"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["value"].as_f64().unwrap() > 1.0);
}

#[test]
fn sweep_csv() {
    let out = maxavg(&["sweep", "--from", "1", "--to", "3", "--points", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,s_star,deficit,support,residual");
    let values: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values[0], 1.0);
    assert!((values[1] - 1.8284271247461903).abs() < 1e-12);
    assert!((values[2] - 2.4641016151377544).abs() < 1e-12);
    assert_eq!(maxavg(&["sweep", "--from", "10", "--to", "3"]).status.code(), Some(1));
    assert_eq!(maxavg(&["sweep", "--from", "1", "--to", "3", "--points", "0"]).status.code(), Some(1));
}

#[test]
fn sweep_estimate() {
    let out = maxavg(&["sweep", "--from", "1e3", "--to", "1e6", "--points", "4", "--estimate-a"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let a: f64 = text.lines().find_map(|l| l.strip_prefix("# a_hat=")).unwrap().parse().unwrap();
    assert!((a - 1.70465603718).abs() <= 1e-2);
    let short = maxavg(&["sweep", "--from", "1", "--to", "5", "--points", "5", "--estimate-a"]);
    assert!(String::from_utf8(short.stdout).unwrap().contains("# a_hat unavailable"));
    let v = json(&maxavg(&["--format", "json", "sweep", "--from", "2", "--to", "3", "--points", "2"]));
    assert_eq!(v["records"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_suites() {
    let out = maxavg(&["verify", "--suite", "poset"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).all(|l| l.starts_with("PASS poset")));
    assert!(text.contains("worked example"));
    let out = maxavg(&["--seed", "42", "verify", "--suite", "reduction"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("cyclic infimum equals reduced minimum"));
    assert_eq!(maxavg(&["verify", "--suite", "nope"]).status.code(), Some(1));
}

#[test]
fn outputs_are_deterministic() {
    let a = maxavg(&["--seed", "7", "--format", "json", "verify", "--suite", "sums"]);
    let b = maxavg(&["--seed", "7", "--format", "json", "verify", "--suite", "sums"]);
    assert_eq!(a.stdout, b.stdout);
    let a = maxavg(&["sweep", "--from", "10", "--to", "1000", "--points", "5"]);
    let b = maxavg(&["sweep", "--from", "10", "--to", "1000", "--points", "5"]);
    assert_eq!(a.stdout, b.stdout);
}
