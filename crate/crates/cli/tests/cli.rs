use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use seqgraph_cli::parse_generated;
use seqgraph_core::graph::build_graph;
use seqgraph_core::sequence::{kronecker_prefix, KroneckerParams, Theta};

fn seqgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn json_ok(args: &[&str]) -> Value {
    let out = seqgraph(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fails_with(args: &[&str], code: i32) -> Value {
    let out = seqgraph(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert!(out.stdout.is_empty());
    serde_json::from_slice(&out.stderr).expect("stderr is a JSON error")
}

fn pi(v: &Value) -> Vec<u64> {
    v["pi"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn generate_examples() {
    let v = json_ok(&["generate", "--family", "kronecker", "--theta", "golden", "--n", "8"]);
    assert_eq!(pi(&v), [0, 5, 2, 7, 4, 1, 6, 3]);
    assert_eq!(v["edges"].as_array().unwrap().len(), 16);
    let v = json_ok(&["generate", "--family", "vdc", "--base", "2", "--n", "8"]);
    assert_eq!(pi(&v), [0, 4, 2, 6, 1, 5, 3, 7]);

    let v = json_ok(&["generate", "--n", "1"]);
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 2);
    assert!(edges.iter().all(|e| e["u"] == 0 && e["v"] == 0));
}

#[test]
fn generate_round_trips() {
    let out = seqgraph(&["generate", "--theta", "sqrt2", "--n", "40"]);
    let g = parse_generated(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let expected = build_graph(&kronecker_prefix(&KroneckerParams::new(Theta::Sqrt2), 40).unwrap());
    assert_eq!(g, expected);
}

#[test]
fn analyze_examples() {
    let v = json_ok(&["analyze", "--theta", "golden", "--n", "8"]);
    assert_eq!(v["nice"], true);
    assert_eq!(v["circulant"], serde_json::json!([1, 5]));
    let v = json_ok(&["analyze", "--theta", "golden", "--n", "6"]);
    assert_eq!(v["nice"], false);
    assert_eq!(v["gaps"], serde_json::json!([5, 2, -3]));
    let v = json_ok(&["analyze", "--family", "vdc", "--n", "16"]);
    assert!(v["gap_count"].as_u64().unwrap() > 3);
    assert_eq!(v["three_gap"], false);
}

#[test]
fn embed_examples() {
    let v = json_ok(&["embed", "--family", "vdc", "--n", "16"]);
    assert_eq!(v["points"].as_array().unwrap().len(), 16);
    assert_eq!(v["routes"].as_array().unwrap().len(), 32);
    assert_eq!(v["reroutes"], 2);
    assert_eq!(v["verification"]["verified"], true);
    assert_eq!(v["verification"]["case_counts"], serde_json::json!([12, 12, 3, 3, 2]));
    let wrap = v["routes"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["case"] == 3)
        .unwrap();
    assert!(wrap["crossings"][0]["segment"].as_str().unwrap().starts_with('h'));

    let v = json_ok(&["embed", "--family", "vdc", "--n", "10", "--drop-last-edge"]);
    assert_eq!(v["minor"]["verdict"], true);
    assert_eq!(v["minor"]["host_n"], 16);
    assert_eq!(v["host"]["verification"]["verified"], true);

    let v = json_ok(&["embed", "--family", "kronecker", "--theta", "golden", "--n", "8"]);
    assert_eq!(v["genus"], 1);
    assert_eq!(v["connection_set"], serde_json::json!([1, 5]));

    let v = json_ok(&["embed", "--theta", "golden", "--n", "6", "--drop-last-edge"]);
    assert_eq!(v["minor"]["verdict"], true);
    assert_eq!(v["host"]["n"], 8);
    assert_eq!(v["host"]["genus"], 1);
}

#[test]
fn embed_svg() {
    let out = seqgraph(&["embed", "--family", "vdc", "--n", "64", "--format", "svg"]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<circle").count(), 64);
    assert_eq!(svg.matches(r#"class="reroute""#).count(), 4);
}

#[test]
fn minor_examples() {
    let v = json_ok(&["minor", "--family", "vdc", "--n", "8", "--m", "16"]);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["deleted"].as_array().unwrap().len(), 9);
    assert_eq!(v["contractions"].as_array().unwrap().len(), 8);
    let v = json_ok(&["minor", "--theta", "golden", "--n", "8", "--m", "13"]);
    assert_eq!(v["verdict"], true);
}

#[test]
fn iet_examples() {
    let spec = data("four_interval.toml");
    let v = json_ok(&["iet", "--iet-spec", &spec, "--n", "1000"]);
    assert_eq!(v["graph"]["edges"], 2000);
    assert_eq!(v["graph"]["degrees"], serde_json::json!({ "4": 1000 }));
    assert!(v["genus"].as_i64().unwrap() >= 0);

    let rotation = data("golden_rotation.toml");
    let a = json_ok(&["generate", "--family", "iet", "--iet-spec", &rotation, "--n", "100"]);
    let b = json_ok(&["generate", "--theta", "golden", "--n", "100"]);
    assert_eq!(a["edges"], b["edges"]);

    let v = json_ok(&["iet", "--iet-spec", &data("odometer.toml"), "--n", "256"]);
    assert_eq!(v["map"]["kind"], "odometer");
}

#[test]
fn exit_codes() {
    let e = fails_with(&["minor", "--family", "vdc", "--n", "16", "--m", "16"], 2);
    assert_eq!(e["error"], "invalid_range");
    fails_with(&["generate", "--n", "8", "--frobnicate"], 2);
    fails_with(&["generate", "--family", "vdc", "--theta", "golden", "--n", "8"], 2);
    fails_with(&["embed", "--family", "vdc", "--base", "3", "--n", "9"], 2);
    fails_with(&["embed", "--theta", "golden", "--n", "8", "--format", "svg"], 2);
    fails_with(&["generate", "--family", "iet", "--iet-spec", "/nonexistent.toml", "--n", "4"], 2);

    let e = fails_with(&["generate", "--theta", "0.5", "--n", "4"], 3);
    assert_eq!(e["error"], "precision_insufficient");

    let e = fails_with(&["embed", "--theta", "golden", "--n", "6"], 4);
    assert_eq!(e["error"], "not_admissible");
    fails_with(&["embed", "--family", "vdc", "--n", "10"], 4);

    let e = fails_with(&["iet", "--iet-spec", &data("identity.toml"), "--n", "10"], 6);
    assert_eq!(e["error"], "orbit_revisit");
}

#[test]
fn outputs_are_deterministic() {
    let spec = data("six_interval.toml");
    for args in [
        vec!["embed", "--family", "vdc", "--n", "64"],
        vec!["embed", "--family", "vdc", "--n", "16", "--format", "svg"],
        vec!["analyze", "--theta", "sqrt(3)", "--n", "500"],
        vec!["iet", "--iet-spec", spec.as_str(), "--n", "300", "--drop-last-edge"],
        vec!["scan", "--theta", "golden", "--n", "300"],
    ] {
        let a = seqgraph(&args);
        let b = seqgraph(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn writes_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("graph.json");
    let out = seqgraph(&["generate", "--n", "5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["n"], 5);
}

#[test]
fn scan_reports_tori() {
    let v = json_ok(&["scan", "--theta", "golden", "--n", "100"]);
    let ns: Vec<u64> = v["nice"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["n"].as_u64().unwrap())
        .collect();
    assert_eq!(ns, [2, 3, 5, 8, 13, 21, 34, 55, 89]);
    assert_eq!(v["all_genus_one"], true);
    fails_with(&["scan", "--family", "vdc", "--n", "100"], 2);
}
