//! End-to-end tests of the `majority` binary: subcommand round-trips,
//! exit codes, and byte-level determinism of emitted documents.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

const EXIT_OK: i32 = 0;
const EXIT_VERIFICATION_FAILED: i32 = 1;
const EXIT_INPUT_ERROR: i32 = 2;
const EXIT_RESOURCE_CAP: i32 = 3;

fn majority(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majority"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn gen_solve_verify_round_trip() {
    let dir = tempdir().unwrap();
    let instance = dir.path().join("star.json");
    let result = dir.path().join("result.json");

    let gen = majority(&[
        "gen", "--family", "star", "--order", "8", "--k", "2",
        "--output", instance.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&gen), EXIT_OK, "{gen:?}");

    let solve = majority(&[
        "solve", "--input", instance.to_str().unwrap(),
        "--output", result.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&solve), EXIT_OK, "{solve:?}");

    // a result document embeds everything verify needs
    let verify = majority(&["verify", "--input", result.to_str().unwrap()]);
    assert_eq!(exit_code(&verify), EXIT_OK, "{verify:?}");
    let doc = stdout_json(&verify);
    assert_eq!(doc["report"]["overall_pass"], serde_json::json!(true));
}

#[test]
fn verify_rejects_bad_colouring_with_exit_one() {
    let dir = tempdir().unwrap();
    let instance = dir.path().join("triangle.json");
    let colouring = dir.path().join("mono.json");
    write(
        &instance,
        r#"{"graph": {"order": 3, "edges": [[1,2],[2,3],[1,3]]},
            "uniform_list": ["a","b"], "k": 2}"#,
    );
    write(&colouring, r#"{"1": "a", "2": "a", "3": "a"}"#);

    let verify = majority(&[
        "verify",
        "--input", instance.to_str().unwrap(),
        "--colouring", colouring.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&verify), EXIT_VERIFICATION_FAILED);
    let doc = stdout_json(&verify);
    assert_eq!(doc["report"]["overall_pass"], serde_json::json!(false));
    let failing = doc["report"]["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["pass"] == serde_json::json!(false))
        .count();
    assert_eq!(failing, 3);
}

#[test]
fn oracle_reports_nonexistence_with_exit_one() {
    let dir = tempdir().unwrap();
    let instance = dir.path().join("dtriangle.json");
    write(
        &instance,
        r#"{"graph": {"order": 3, "edges": [[1,2],[2,3],[3,1]], "directed": true},
            "uniform_list": ["a"], "k": 2}"#,
    );
    let oracle = majority(&["oracle", "--input", instance.to_str().unwrap()]);
    assert_eq!(exit_code(&oracle), EXIT_VERIFICATION_FAILED);
    let doc = stdout_json(&oracle);
    assert_eq!(doc["oracle"]["exists"], serde_json::json!(false));
}

#[test]
fn malformed_input_is_exit_two() {
    let dir = tempdir().unwrap();
    let instance = dir.path().join("broken.json");
    write(&instance, "{ not json");
    let solve = majority(&["solve", "--input", instance.to_str().unwrap()]);
    assert_eq!(exit_code(&solve), EXIT_INPUT_ERROR);

    // schema violations too: a vertex without a list
    write(
        &instance,
        r#"{"graph": {"order": 2, "edges": [[1,2]]}, "lists": {"1": ["a","b"]}, "k": 2}"#,
    );
    let solve = majority(&["solve", "--input", instance.to_str().unwrap()]);
    assert_eq!(exit_code(&solve), EXIT_INPUT_ERROR);
}

#[test]
fn oracle_cap_is_exit_three() {
    let dir = tempdir().unwrap();
    let instance = dir.path().join("big.json");
    write(
        &instance,
        r#"{"graph": {"order": 40, "edges": [[1,2]]}, "uniform_list": ["a","b"], "k": 2}"#,
    );
    let oracle = majority(&[
        "oracle", "--input", instance.to_str().unwrap(), "--cap", "1000",
    ]);
    assert_eq!(exit_code(&oracle), EXIT_RESOURCE_CAP);
}

#[test]
fn edgelist_input_gets_uniform_lists() {
    let dir = tempdir().unwrap();
    let edges = dir.path().join("path.txt");
    write(&edges, "# path on 4 vertices\n4\n1 2\n2 3\n3 4\n");
    let solve = majority(&[
        "solve", "--input", edges.to_str().unwrap(), "--format", "edgelist", "--k", "2",
    ]);
    assert_eq!(exit_code(&solve), EXIT_OK, "{solve:?}");
    let doc = stdout_json(&solve);
    assert_eq!(doc["instance"]["k"], serde_json::json!(2));
    assert_eq!(doc["report"]["overall_pass"], serde_json::json!(true));
}

#[test]
fn restrict_walkthrough_via_cli() {
    let dir = tempdir().unwrap();
    let instance = dir.path().join("restrict.json");
    write(
        &instance,
        r#"{"graph": {"order": 10, "edges": [[1,2]]},
            "uniform_list": ["a","b","c"], "k": 2,
            "families": [{"label": "X", "vertices": [2,4,6,8,10]}]}"#,
    );
    let restrict = majority(&[
        "restrict", "--input", instance.to_str().unwrap(), "--budget", "3",
    ]);
    assert_eq!(exit_code(&restrict), EXIT_OK);
    let doc = stdout_json(&restrict);
    assert_eq!(doc["sublists"]["2"], serde_json::json!(["b", "c"]));
    assert_eq!(doc["sublists"]["4"], serde_json::json!(["a", "c"]));
    assert_eq!(doc["sublists"]["6"], serde_json::json!(["a", "b"]));
    assert_eq!(doc["removed"]["2"], serde_json::json!("a"));
}

#[test]
fn restrict_accepts_pair_form_families() {
    let dir = tempdir().unwrap();
    let instance = dir.path().join("pairs.json");
    write(
        &instance,
        r#"{"graph": {"order": 10, "edges": [[1,2]]},
            "uniform_list": ["a","b","c"], "k": 2,
            "families": [{"label": "P", "pairs": [[2,"a"],[4,"b"],[6,"a"]]}],
            "budget": 2}"#,
    );
    let restrict = majority(&["restrict", "--input", instance.to_str().unwrap()]);
    assert_eq!(exit_code(&restrict), EXIT_OK, "{restrict:?}");
    let doc = stdout_json(&restrict);
    assert_eq!(doc["sublists"]["2"], serde_json::json!(["b", "c"]));
    assert_eq!(doc["sublists"]["4"], serde_json::json!(["a", "c"]));
    // untouched vertices default to dropping the highest colour
    assert_eq!(doc["sublists"]["6"], serde_json::json!(["a", "b"]));
    let entry = &doc["ledger"]["entries"][0];
    assert_eq!(entry["witnesses"], serde_json::json!([2, 4]));
}

#[test]
fn solve_rejects_cyclic_digraph_as_input_error() {
    let dir = tempdir().unwrap();
    let instance = dir.path().join("cycle.json");
    write(
        &instance,
        r#"{"graph": {"order": 2, "edges": [[1,2],[2,1]], "directed": true},
            "uniform_list": ["a","b"], "k": 2}"#,
    );
    let solve = majority(&["solve", "--input", instance.to_str().unwrap()]);
    assert_eq!(exit_code(&solve), EXIT_INPUT_ERROR);
    let stderr = String::from_utf8_lossy(&solve.stderr);
    assert!(stderr.contains("cycle"), "stderr: {stderr}");
}

#[test]
fn fuzz_subcommand_is_clean() {
    let fuzz = majority(&[
        "fuzz", "--seed", "11", "--trials", "60", "--max-order", "5",
    ]);
    assert_eq!(exit_code(&fuzz), EXIT_OK);
    let doc = stdout_json(&fuzz);
    assert_eq!(doc["fuzz"]["failures"], serde_json::json!([]));

    let invalid = majority(&["fuzz", "--trials", "0"]);
    assert_eq!(exit_code(&invalid), EXIT_INPUT_ERROR);
}

#[test]
fn tower_subcommand_certifies_and_is_deterministic() {
    let run = |path: &Path| {
        let out = majority(&[
            "tower", "--family", "star", "--n-max", "64", "--t", "8",
            "--k", "2", "--budget", "40", "--survivor-floor", "4",
            "--seed", "5", "--output", path.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), EXIT_OK, "{out:?}");
        let mut doc: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        doc.as_object_mut().unwrap().remove("timestamp");
        serde_json::to_string(&doc).unwrap()
    };

    let dir = tempdir().unwrap();
    let first = run(&dir.path().join("a.json"));
    let second = run(&dir.path().join("b.json"));
    assert_eq!(first, second, "tower runs with one seed must agree byte-for-byte");

    let doc: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(doc["tower"]["certification"]["pass"], serde_json::json!(true));
}

#[test]
fn tower_correspondence_mode_runs() {
    let out = majority(&[
        "tower", "--family", "star", "--n-max", "48", "--t", "6", "--k", "2",
        "--budget", "30", "--survivor-floor", "4", "--mode", "correspondence",
        "--matchings", "random", "--seed", "9",
    ]);
    assert_eq!(exit_code(&out), EXIT_OK, "{out:?}");
    let doc = stdout_json(&out);
    assert_eq!(doc["tower"]["mode"], serde_json::json!("correspondence"));
    assert_eq!(doc["tower"]["certification"]["pass"], serde_json::json!(true));
}

#[test]
fn gen_edgelist_round_trips_through_solve() {
    let dir = tempdir().unwrap();
    let edges = dir.path().join("grid.txt");
    let gen = majority(&[
        "gen", "--family", "grid", "--order", "12", "--format", "edgelist",
        "--output", edges.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&gen), EXIT_OK);
    let solve = majority(&[
        "solve", "--input", edges.to_str().unwrap(), "--format", "edgelist",
    ]);
    assert_eq!(exit_code(&solve), EXIT_OK);
}
