use std::path::Path;

use drg_lab::{run, CliOutput, SCHEMA};
use serde_json::Value;

fn lab(args: &[&str]) -> CliOutput {
    run(std::iter::once("drg-lab").chain(args.iter().copied()))
}

fn json(out: &CliOutput) -> Value {
    serde_json::from_str(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", out.stdout))
}

fn build_to(dir: &Path, family: &str) -> String {
    let path = dir.join(format!("{}.json", family.replace([':', ','], "_")));
    let path = path.to_str().unwrap().to_string();
    let out = lab(&["build", family, "--out", &path]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    path
}

#[test]
fn bounds_at_one() {
    let out = lab(&["bounds", "--b", "1"]);
    assert_eq!(out.code, 0);
    let v = json(&out);
    assert_eq!(v["F"], 861);
    assert_eq!(v["G"], 169);
    assert_eq!(v["schema"], SCHEMA);
}

#[test]
fn bounds_rational_and_srg_side() {
    let v = json(&lab(&["bounds", "--b", "2", "--m", "2", "--mu", "2"]));
    assert_eq!(v["mu_bound"], 8);
    assert_eq!(v["claw_f"], 4);
    assert_eq!(v["phi"], 66);
    // G(2) = (4*32 + 4*16 + 4*8 + 1)^2
    assert_eq!(v["G"], 225 * 225);
    let half = json(&lab(&["bounds", "--b", "3/2"]));
    assert!(half["F"].is_string());
    assert_eq!(lab(&["bounds", "--b", "1/2"]).code, 2);
}

#[test]
fn classify_johnson_array() {
    let out = lab(&["classify", "--ia", "25,16,9,4,1;1,4,9,16,25"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let v = json(&out);
    assert_eq!(v["theorem"], "1.1");
    assert_eq!(v["branch"], "ii");
    assert_eq!(v["name"], "Johnson J(10,5)");
    assert!(!v["evidence"].as_array().unwrap().is_empty());
    assert_eq!(v["theorems"]["7.2"]["branch"], "i");
    assert_eq!(v["classical"][0], "(5,1,1,5)");
}

#[test]
fn classify_out_of_scope_is_an_input_error() {
    let out = lab(&["classify", "--ia", "3,2;1,1"]);
    assert_eq!(out.code, 2);
    assert_eq!(json(&out)["error"]["kind"], "scope");
}

#[test]
fn classify_infeasible_array_fails() {
    let out = lab(&["classify", "--ia", "5,4,3,2,1;1,1,1,1,7"]);
    assert_eq!(out.code, 1);
    assert_eq!(json(&out)["feasibility"]["pass"], false);
}

#[test]
fn classify_rejects_two_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = build_to(dir.path(), "petersen");
    assert_eq!(lab(&["classify", &p, "--ia", "3,2;1,1"]).code, 2);
}

#[test]
fn analyze_petersen() {
    let dir = tempfile::tempdir().unwrap();
    let p = build_to(dir.path(), "petersen");
    let out = lab(&["analyze", &p]);
    assert_eq!(out.code, 0);
    let v = json(&out);
    assert_eq!(v["ia"], "3,2;1,1");
    assert_eq!(v["v"], 10);
    assert_eq!(v["srg"], "(10,3,0,1)");
}

#[test]
fn analyze_non_drg_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = build_to(dir.path(), "grid:2,3");
    let out = lab(&["analyze", &p]);
    assert_eq!(out.code, 1);
    let v = json(&out);
    assert_eq!(v["distance_regular"], false);
    assert_eq!(v["drg"]["result"], "not_distance_regular");
}

#[test]
fn build_to_stdout_round_trips() {
    let out = lab(&["build", "johnson:6,3"]);
    assert_eq!(out.code, 0);
    let v = json(&out);
    assert_eq!(v["format"], "drg-graph-v1");
    assert_eq!(v["n"], 20);
}

#[test]
fn build_from_orthogonal_array_and_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let oa = dir.path().join("oa.json");
    let rows: Vec<Vec<u32>> = vec![
        (0..9).map(|c| c / 3).collect(),
        (0..9).map(|c| c % 3).collect(),
    ];
    std::fs::write(&oa, serde_json::to_string(&rows).unwrap()).unwrap();
    let out = lab(&["build", "--oa", oa.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(json(&out)["n"], 9);

    // Fano plane: block graph is K7.
    let blocks = dir.path().join("fano.json");
    std::fs::write(
        &blocks,
        r#"{"blocks":[[0,1,2],[0,3,4],[0,5,6],[1,3,5],[1,4,6],[2,3,6],[2,4,5]]}"#,
    )
    .unwrap();
    let out = lab(&["build", "--blocks", blocks.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(json(&out)["n"], 7);
}

#[test]
fn build_rejects_invalid_parameters() {
    let out = lab(&["build", "johnson:10,0"]);
    assert_eq!(out.code, 2);
    assert_eq!(json(&out)["error"]["kind"], "input");
}

#[test]
fn homog_icosahedron_and_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let p = build_to(dir.path(), "icosahedron");
    let v = json(&lab(&["homog", &p, "--i", "1"]));
    assert_eq!(v["holds"], true);
    let a = lab(&["homog", &p, "--i", "1", "--sample", "10", "--seed", "7"]);
    let b = lab(&["homog", &p, "--i", "1", "--sample", "10", "--seed", "7"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(lab(&["homog", &p, "--i", "1", "--sample", "10"]).code, 2);
    assert_eq!(lab(&["homog", &p, "--i", "1", "--seed", "10"]).code, 2);
}

#[test]
fn cab_on_johnson_matches_formula() {
    let dir = tempfile::tempdir().unwrap();
    let p = build_to(dir.path(), "johnson:8,4");
    let out = lab(&["cab", &p, "--upto", "3"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let v = json(&out);
    assert_eq!(v["holds"], true);
    assert_eq!(v["formula_agrees"], true);
    for q in v["quotients"].as_array().unwrap() {
        assert_eq!(q["matches_local"], true);
    }
}

#[test]
fn cab_level_out_of_range() {
    let dir = tempfile::tempdir().unwrap();
    let p = build_to(dir.path(), "johnson:6,3");
    assert_eq!(lab(&["cab", &p, "--upto", "9"]).code, 2);
}

#[test]
fn classify_graph_file_verifies_homogeneity() {
    let dir = tempfile::tempdir().unwrap();
    let p = build_to(dir.path(), "johnson:10,5");
    let out = lab(&["classify", &p]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let v = json(&out);
    assert_eq!(v["branch"], "ii");
    assert_eq!(v["homogeneity"], "verified");
    assert_eq!(v["input"], "graph");
}

#[test]
fn srg_reports() {
    let v = json(&lab(&["srg", "--params", "25,8,3,2"]));
    assert_eq!(v["families"][0], "LatinSquare(2,5)");
    let out = lab(&["srg", "--params", "58,27,16,9"]);
    assert_eq!(out.code, 1, "mu-bound violation is a failing property");
    assert_eq!(lab(&["srg", "--params", "10,3,0"]).code, 2);
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = lab(&["bounds", "--b", "1", "--frobnicate"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("Usage"));
    assert_eq!(json(&out)["error"]["kind"], "usage");
}

#[test]
fn threads_flag_gives_identical_output() {
    let a = lab(&["classify", "--ia", "45,28,15,6,1;1,6,15,28,45"]);
    let b = lab(&[
        "--threads",
        "1",
        "classify",
        "--ia",
        "45,28,15,6,1;1,6,15,28,45",
    ]);
    assert_eq!(a, b);
}

#[test]
fn output_keys_are_sorted() {
    let out = lab(&["classify", "--ia", "25,16,9,4,1;1,4,9,16,25"]);
    let keys: Vec<String> = json(&out).as_object().unwrap().keys().cloned().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let top: Vec<&str> = out
        .stdout
        .lines()
        .filter(|l| l.starts_with("  \""))
        .collect();
    let names: Vec<&str> = top
        .iter()
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut names_sorted = names.clone();
    names_sorted.sort();
    assert_eq!(names, names_sorted);
}

#[test]
fn binary_exit_codes_and_streams() {
    let bin = env!("CARGO_BIN_EXE_drg-lab");
    let ok = std::process::Command::new(bin)
        .args(["bounds", "--b", "1"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(ok.stderr.is_empty());
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["F"], 861);
    let bad = std::process::Command::new(bin)
        .args(["nope"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}
