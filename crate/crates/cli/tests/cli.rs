use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn listcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_listcap")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn bsc(dir: &Path) -> PathBuf {
    write(dir, "bsc.json", r#"{"kind":"classical","matrix":[[0.9,0.1],[0.1,0.9]]}"#)
}

const ML_CODE: &str = r#"{"n":1,"N":2,"L":1,"encoder":[[0],[1]],"decoder":{"kind":"classical","map":[[1],[2]]}}"#;

#[test]
fn capacity_in_bits() {
    let dir = TempDir::new().unwrap();
    let out = listcap(&["--units", "bits", "capacity", "--channel", bsc(dir.path()).to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 0.5310044064107188).abs() < 1e-6);
    assert_eq!(v["units"], "bits");

    let id4 = r#"{"kind":"classical","matrix":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#;
    let path = write(dir.path(), "id4.json", id4);
    let v = json(&listcap(&["--units", "bits", "capacity", "--channel", path.to_str().unwrap()]));
    assert!((v["value"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn bad_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let broken = write(dir.path(), "broken.json", r#"{"kind":"classical","matrix":[[0.9,0.1]"#);
    let out = listcap(&["capacity", "--channel", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    let rows = write(dir.path(), "rows.json", r#"{"kind":"classical","matrix":[[0.5,0.6],[0.5,0.5]]}"#);
    assert_eq!(listcap(&["capacity", "--channel", rows.to_str().unwrap()]).status.code(), Some(1));
    let missing = dir.path().join("missing.json");
    assert_eq!(listcap(&["capacity", "--channel", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn capacity_iteration_cap_exits_two() {
    let dir = TempDir::new().unwrap();
    let skewed = write(dir.path(), "z.json", r#"{"kind":"classical","matrix":[[1,0],[0.5,0.5]]}"#);
    let out = listcap(&["--tol", "1e-14", "capacity", "--channel", skewed.to_str().unwrap(), "--max-iter", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["converged"], false);
}

fn exponent_summary(dir: &Path, rate: &str) -> Value {
    let channel = bsc(dir);
    let summary = dir.join(format!("summary-{rate}.json"));
    let trace = dir.join(format!("trace-{rate}.csv"));
    let out = listcap(&[
        "--out",
        trace.to_str().unwrap(),
        "exponent",
        "--channel",
        channel.to_str().unwrap(),
        "--rate",
        rate,
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(trace).unwrap();
    assert!(csv.starts_with("s,phi,log_phi,objective\n"));
    assert!(csv.lines().count() > 100);
    serde_json::from_str(&std::fs::read_to_string(summary).unwrap()).unwrap()
}

#[test]
fn exponent_on_both_sides_of_capacity() {
    let dir = TempDir::new().unwrap();
    let above = exponent_summary(dir.path(), "0.6");
    assert!(above["exponent"].as_f64().unwrap() > 0.05);
    let below = exponent_summary(dir.path(), "0.1");
    assert_eq!(below["exponent"].as_f64().unwrap(), 0.0);
    let at = exponent_summary(dir.path(), "0.3680642071684971");
    assert!(at["exponent"].as_f64().unwrap().abs() <= 1e-6);
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let channel = bsc(dir.path());
    let base = write(dir.path(), "base.json", ML_CODE);
    let lifted = listcap(&["lift", "--code", base.to_str().unwrap(), "--list-size", "2"]);
    assert_eq!(lifted.status.code(), Some(0));
    let lifted = write(dir.path(), "lifted.json", &json(&lifted)["code"].to_string());

    let run = |s: &str| {
        listcap(&["verify", "--code", lifted.to_str().unwrap(), "--channel", channel.to_str().unwrap(), "--s", s])
    };
    let ok = run("0,-0.5,-1");
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let report = json(&ok);
    assert_eq!(report["violated"], false);
    assert_eq!(report["rows"].as_array().unwrap().len(), 3);
    assert_eq!(run("0.5").status.code(), Some(1));
    assert_eq!(run("").status.code(), Some(1));
}

#[test]
fn code_evaluation() {
    let dir = TempDir::new().unwrap();
    let channel = bsc(dir.path());
    let map: Vec<String> =
        (0..8u32).map(|y| if y.count_ones() >= 2 { "[2]".to_string() } else { "[1]".to_string() }).collect();
    let repetition = format!(
        r#"{{"n":3,"N":2,"L":1,"encoder":[[0,0,0],[1,1,1]],"decoder":{{"kind":"classical","map":[{}]}}}}"#,
        map.join(",")
    );
    let rep = write(dir.path(), "rep.json", &repetition);
    let v = json(&listcap(&["code-eval", "--code", rep.to_str().unwrap(), "--channel", channel.to_str().unwrap()]));
    assert!((v["p_e"].as_f64().unwrap() - 0.028).abs() < 1e-15);

    let full = write(
        dir.path(),
        "full.json",
        r#"{"n":1,"N":2,"L":2,"encoder":[[0],[1]],"decoder":{"kind":"classical","map":[[1,2],[1,2]]}}"#,
    );
    let v = json(&listcap(&["code-eval", "--code", full.to_str().unwrap(), "--channel", channel.to_str().unwrap()]));
    assert_eq!(v["p_e"].as_f64().unwrap(), 0.0);

    let quantum = write(
        dir.path(),
        "quantum.json",
        r#"{"n":1,"N":2,"L":1,"encoder":[[0],[1]],"decoder":{"kind":"quantum","elements":[
            {"subset":[1],"re":[[1,0],[0,0]]},{"subset":[2],"re":[[0,0],[0,1]]}]}}"#,
    );
    let out = listcap(&["code-eval", "--code", quantum.to_str().unwrap(), "--channel", channel.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lift_reports_equal_error() {
    let dir = TempDir::new().unwrap();
    let channel = bsc(dir.path());
    let base = write(dir.path(), "base.json", ML_CODE);
    let v = json(&listcap(&[
        "lift",
        "--code",
        base.to_str().unwrap(),
        "--list-size",
        "3",
        "--channel",
        channel.to_str().unwrap(),
    ]));
    assert_eq!(v["code"]["N"], 6);
    assert_eq!(v["base"]["p_e"], v["metrics"]["p_e"]);
}

#[test]
fn sweep_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let channel = bsc(dir.path());
    let args = ["--seed", "7", "sweep", "--channel", channel.to_str().unwrap(), "--rates", "0.25,0.6", "--lengths", "4,6", "--trials", "500"];
    let a = listcap(&args);
    let b = listcap(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().next().unwrap().contains("p_e"));
}
