//! End-to-end tests against the compiled binary.

use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linarr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("valid JSON output")
}

#[test]
fn analyze_catalog_json() {
    let out = run(&["analyze", "--catalog", "ceva3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["line_count"], 9);
    assert_eq!(v["hirzebruch"]["holds"], true);
    assert_eq!(v["hirzebruch"]["n"], 3);
    assert_eq!(v["multiplicities"][0][0], 3);
    assert_eq!(v["multiplicities"][0][1], 12);
}

#[test]
fn analyze_rejects_duplicate_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.json");
    fs::write(
        &path,
        r#"{"cyclotomic_order": 1, "lines": [
            [["1"],["0"],["0"]],
            [["0"],["1"],["0"]],
            [["2"],["0"],["0"]]
        ]}"#,
    )
    .unwrap();
    let out = run(&["analyze", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_rejects_malformed_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{not json").unwrap();
    let out = run(&["analyze", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn metric_exit_codes() {
    let out = run(&["metric", "--catalog", "ceva4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"], "feasible");
    assert_eq!(v["asphericity"], "aspherical_lp");
    assert_eq!(v["certificate_verified"], true);
    // certificate rationals are strings, never floats
    assert!(v["certificate"]["z"][0].is_string());

    let out = run(&["metric", "--catalog", "triangle", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"], "infeasible");
    assert_eq!(v["asphericity"], "aspherical_triangle_special_case");

    let out = run(&["metric", "--catalog", "generic4", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn metric_json_is_deterministic() {
    let a = run(&["metric", "--catalog", "ceva3", "--format", "json"]);
    let b = run(&["metric", "--catalog", "ceva3", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn hopf_lines_file() {
    let dir = tempfile::tempdir().unwrap();
    let ortho = dir.path().join("ortho.json");
    fs::write(&ortho, r#"{"lines": [[[1,0],[0,0]], [[0,0],[1,0]]]}"#).unwrap();
    let out = run(&["hopf", "--file", ortho.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "cat1_boundary");

    // two lines at angle pi/3
    let tilted = dir.path().join("tilted.json");
    let c = (std::f64::consts::FRAC_PI_3).cos();
    let s = (std::f64::consts::FRAC_PI_3).sin();
    fs::write(
        &tilted,
        format!(r#"{{"lines": [[[1,0],[0,0]], [[{c},0],[{s},0]]]}}"#),
    )
    .unwrap();
    let out = run(&["hopf", "--file", tilted.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "not_cat1");

    // a single line violates the precondition
    let single = dir.path().join("single.json");
    fs::write(&single, r#"{"lines": [[[1,0],[0,0]]]}"#).unwrap();
    let out = run(&["hopf", "--file", single.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn counterexample_exit_codes() {
    let out = run(&["counterexample", "--n", "2", "--eps", "0.01", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["confirmed"], true);
    assert_eq!(v["epsilon"], "1/100");
    assert_eq!(v["extendability"]["extendable"], false);

    let out = run(&["counterexample", "--n", "4", "--eps", "1/100"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["counterexample", "--n", "2", "--eps", "2.0"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["counterexample", "--n", "1", "--eps", "0.01"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn catalog_list_and_export() {
    let out = run(&["catalog", "list", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    for want in ["triangle", "ceva3", "klein", "valentiner"] {
        assert!(names.contains(&want), "{want} missing from catalog list");
    }

    let a = run(&["catalog", "export", "klein"]);
    let b = run(&["catalog", "export", "klein"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let out = run(&["catalog", "export", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exported_arrangement_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ceva3.json");
    let out = run(&["catalog", "export", "ceva3"]);
    fs::write(&path, &out.stdout).unwrap();
    let out = run(&["analyze", "--file", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["hirzebruch"]["n"], 3);
}

#[test]
fn batch_dir_isolation_and_order() {
    let dir = tempfile::tempdir().unwrap();
    let good = run(&["catalog", "export", "triangle"]);
    fs::write(dir.path().join("a_good.json"), &good.stdout).unwrap();
    fs::write(dir.path().join("b_bad.json"), "{broken").unwrap();
    let good2 = run(&["catalog", "export", "ceva3"]);
    fs::write(dir.path().join("c_good.json"), &good2.stdout).unwrap();

    let out = run(&[
        "analyze",
        "--dir",
        dir.path().to_str().unwrap(),
        "--format",
        "json",
        "--jobs",
        "2",
    ]);
    // the broken file taints the exit code but not its neighbours
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 3);
    assert!(arr[0]["input"].as_str().unwrap().ends_with("a_good.json"));
    assert!(arr[1]["input"].as_str().unwrap().ends_with("b_bad.json"));
    assert!(arr[2]["input"].as_str().unwrap().ends_with("c_good.json"));
    assert_eq!(arr[0]["line_count"], 3);
    assert!(arr[1]["error"].is_string());
    assert_eq!(arr[2]["line_count"], 9);
}

#[test]
fn input_source_validation() {
    let out = run(&["analyze"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["analyze", "--catalog", "ceva3", "--file", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
}
