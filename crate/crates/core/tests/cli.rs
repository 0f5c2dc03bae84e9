//! End-to-end checks of the command-line interface: every subcommand is a
//! thin adapter whose outputs match the library calls.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sogkit::{build_blocked_graph, GadgetParams, Graph};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_sogkit")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn outcome(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON outcome")
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sogkit-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_prism(dir: &Path) -> PathBuf {
    let path = dir.join("prism.json");
    let g = serde_json::json!({
        "vertices": ["u1","u2","u3","w1","w2","w3"],
        "edges": [["u1","u2"],["u1","u3"],["u1","w1"],["u2","u3"],["u2","w2"],
                  ["u3","w3"],["w1","w2"],["w1","w3"],["w2","w3"]]
    });
    std::fs::write(&path, serde_json::to_string(&g).unwrap()).unwrap();
    path
}

#[test]
fn reduce_matches_library_and_counts() {
    let dir = workdir("reduce");
    let prism = write_prism(&dir);
    let out = dir.join("blocked.json");
    let output = run(&[
        "reduce",
        "--input",
        prism.to_str().unwrap(),
        "--k",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let outcome = outcome(&output);
    assert_eq!(outcome["status"], "ok");
    assert_eq!(outcome["result"]["vertices"], 137);

    // Golden comparison with the direct library call.
    let g: Graph = serde_json::from_str(&std::fs::read_to_string(&prism).unwrap()).unwrap();
    let (expected, _) = build_blocked_graph(&g, GadgetParams::new(3, 0).unwrap()).unwrap();
    let emitted: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(
        emitted["vertices"],
        serde_json::to_value(&expected).unwrap()["vertices"]
    );
    assert_eq!(emitted["edges"], serde_json::to_value(&expected).unwrap()["edges"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn represent_verify_decode_pipeline() {
    let dir = workdir("pipeline");
    let prism = write_prism(&dir);
    let rep = dir.join("rep.json");
    let labels = dir.join("labels.json");
    let blocked = dir.join("blocked.json");

    assert!(run(&[
        "reduce",
        "--input",
        prism.to_str().unwrap(),
        "--k",
        "3",
        "--out",
        blocked.to_str().unwrap(),
    ])
    .status
    .success());
    assert!(run(&[
        "represent",
        "--mode",
        "star",
        "--graph",
        prism.to_str().unwrap(),
        "--k",
        "3",
        "--out",
        rep.to_str().unwrap(),
        "--labels-out",
        labels.to_str().unwrap(),
    ])
    .status
    .success());

    // The blocked file doubles as the verification target.
    let blocked_graph = dir.join("blocked-graph.json");
    let full: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&blocked).unwrap()).unwrap();
    std::fs::write(
        &blocked_graph,
        serde_json::json!({"vertices": full["vertices"], "edges": full["edges"]}).to_string(),
    )
    .unwrap();

    let verify = run(&[
        "verify",
        "--rep",
        rep.to_str().unwrap(),
        "--graph",
        blocked_graph.to_str().unwrap(),
        "--relation",
        "overlap",
    ]);
    assert!(verify.status.success());
    assert_eq!(outcome(&verify)["result"]["verdict"], "pass");

    let decode = run(&[
        "decode",
        "--rep",
        rep.to_str().unwrap(),
        "--labels",
        labels.to_str().unwrap(),
        "--graph",
        prism.to_str().unwrap(),
        "--k",
        "3",
    ]);
    assert!(decode.status.success());
    let decoded = outcome(&decode);
    assert_eq!(decoded["result"]["coloring"]["k"], 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn analyze_double_star() {
    let dir = workdir("analyze");
    let tree = dir.join("doublestar.json");
    std::fs::write(
        &tree,
        serde_json::json!({
            "nodes": ["c1","c2","a","b","d","e"],
            "edges": [["c1","c2"],["a","c1"],["b","c1"],["c2","d"],["c2","e"]]
        })
        .to_string(),
    )
    .unwrap();
    let output = run(&["analyze", "--tree", tree.to_str().unwrap()]);
    assert!(output.status.success());
    let result = &outcome(&output)["result"];
    assert_eq!(result["leafage"], 4);
    assert_eq!(result["lastbranches"].as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn recognize_reports_bounded_absence() {
    let dir = workdir("recognize");
    let wheel = dir.join("w5.json");
    std::fs::write(
        &wheel,
        serde_json::json!({
            "vertices": ["hub","r1","r2","r3","r4","r5"],
            "edges": [["hub","r1"],["hub","r2"],["hub","r3"],["hub","r4"],["hub","r5"],
                      ["r1","r2"],["r2","r3"],["r3","r4"],["r4","r5"],["r1","r5"]]
        })
        .to_string(),
    )
    .unwrap();
    let output = run(&[
        "recognize",
        "--graph",
        wheel.to_str().unwrap(),
        "--max-host",
        "8",
        "--leafage",
        "2",
    ]);
    assert!(output.status.success());
    assert_eq!(outcome(&output)["result"]["status"], "bounded_absent");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn export_emits_dot() {
    let dir = workdir("export");
    let prism = write_prism(&dir);
    let output = run(&["export", "--input", prism.to_str().unwrap(), "--kind", "graph"]);
    assert!(output.status.success());
    let dot = outcome(&output)["result"]["dot"].as_str().unwrap().to_string();
    assert!(dot.starts_with("graph g {"));
    assert!(dot.contains("\"u1\" -- \"u2\";"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn malformed_json_fails_with_position() {
    let dir = workdir("badjson");
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\n  \"vertices\": [,]\n}").unwrap();
    let output = run(&["analyze", "--tree", path.to_str().unwrap()]);
    assert!(!output.status.success());
    let outcome = outcome(&output);
    assert_eq!(outcome["status"], "fail");
    assert!(outcome["diagnostics"][0].as_str().unwrap().contains("line 2"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unknown_flags_exit_with_usage_error() {
    let output = run(&["analyze", "--no-such-flag"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn failed_verification_exits_nonzero_with_pairs() {
    let dir = workdir("verifail");
    let rep = dir.join("rep.json");
    std::fs::write(
        &rep,
        serde_json::json!({
            "host": {"nodes": ["a","b","c"], "edges": [["a","b"],["b","c"]]},
            "subtrees": {"x": ["a","b","c"], "y": ["b"]}
        })
        .to_string(),
    )
    .unwrap();
    let k2 = dir.join("k2.json");
    std::fs::write(
        &k2,
        serde_json::json!({"vertices": ["x","y"], "edges": [["x","y"]]}).to_string(),
    )
    .unwrap();
    let output = run(&[
        "verify",
        "--rep",
        rep.to_str().unwrap(),
        "--graph",
        k2.to_str().unwrap(),
    ]);
    assert!(!output.status.success());
    let outcome = outcome(&output);
    assert_eq!(outcome["result"]["verdict"], "fail");
    assert_eq!(outcome["result"]["offending_pairs"].as_array().unwrap().len(), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
