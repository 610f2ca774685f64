//! End-to-end tests driving the compiled binary through its file formats.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_latsum"))
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn write_job(name: &str, contents: &str) -> PathBuf {
    let path = tmp(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run_ok(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const SQUARE_JOB: &str = r#"{
  "dim": 2,
  "polytope": {"vertices": [["0","0"],["4","0"],["0","4"],["4","4"]]},
  "L": [["0","1"]],
  "options": {"samples": ["1/4","1","5/2"]}
}"#;

#[test]
fn ehrhart_emits_the_square_quasi_polynomial() {
    let job = write_job("square.json", SQUARE_JOB);
    let out = bin().args(["ehrhart", "--input"]).arg(&job).output().unwrap();
    let value = run_ok(&out);
    assert_eq!(value["degree"], 2);
    assert_eq!(value["period"], 1);
    assert_eq!(value["coeffs"]["2"][0]["coeff"], "16");
    assert!(value["coeffs"].get("0").is_none());
}

#[test]
fn output_flag_splits_json_and_rendering() {
    let job = write_job("square-render.json", SQUARE_JOB);
    let qp_path = tmp("square-qp.json");
    let out = bin()
        .args(["ehrhart", "--input"])
        .arg(&job)
        .arg("--output")
        .arg(&qp_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("16 t^2 + (4 - 4 {4t}_1) t"), "got {stdout}");
    let stored: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&qp_path).unwrap()).unwrap();
    assert_eq!(stored["degree"], 2);
}

#[test]
fn runs_are_byte_identical() {
    let job = write_job("square-det.json", SQUARE_JOB);
    let one = bin().args(["ehrhart", "--input"]).arg(&job).output().unwrap();
    let two = bin().args(["ehrhart", "--input"]).arg(&job).output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn eval_reads_back_a_stored_quasi_polynomial() {
    let job = write_job("square-store.json", SQUARE_JOB);
    let qp_path = tmp("square-stored-qp.json");
    let out = bin()
        .args(["ehrhart", "--input"])
        .arg(&job)
        .arg("--output")
        .arg(&qp_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .args(["eval", "--input"])
        .arg(&qp_path)
        .args(["--samples", "1,5/2,1/4,1/3"])
        .output()
        .unwrap();
    let value = run_ok(&out);
    let got: Vec<&str> = value["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["value"].as_str().unwrap())
        .collect();
    assert_eq!(got, ["20", "110", "2", "8/3"]);
}

#[test]
fn check_compares_against_the_oracle() {
    let job = write_job("square-check.json", SQUARE_JOB);
    let out = bin().args(["check", "--input"]).arg(&job).output().unwrap();
    let value = run_ok(&out);
    assert_eq!(value["all_equal"], true);
    assert_eq!(value["report"].as_array().unwrap().len(), 3);
}

#[test]
fn check_flags_a_corrupted_claim() {
    // same job, but carrying a stored quasi-polynomial whose fractional
    // correction is off by one; {4t}_1 vanishes at t = 1/4, so only the
    // second sample can see the corruption
    let corrupted = r#"{
  "dim": 2,
  "polytope": {"vertices": [["0","0"],["4","0"],["0","4"],["4","4"]]},
  "L": [["0","1"]],
  "options": {"samples": ["1/4","1/3"]},
  "qp": {
    "degree": 2,
    "period": 1,
    "coeffs": {
      "1": [{"coeff": "4", "atoms": []},
            {"coeff": "-5", "atoms": [{"zeta": 4, "q": 1, "exp": 1}]}],
      "2": [{"coeff": "16", "atoms": []}]
    }
  }
}"#;
    let job = write_job("square-corrupt.json", corrupted);
    let out = bin().args(["check", "--input"]).arg(&job).output().unwrap();
    // a mismatch is a finding, not a failure: the run itself succeeds
    let value = run_ok(&out);
    assert_eq!(value["all_equal"], false);
    let flags: Vec<bool> = value["report"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["equal"].as_bool().unwrap())
        .collect();
    assert_eq!(flags, [true, false]);
}

#[test]
fn genfun_expands_along_a_probed_direction() {
    let job = write_job(
        "triangle-gf.json",
        r#"{
  "dim": 2,
  "polytope": {"vertices": [["0","0"],["4","0"],["0","11/3"]]},
  "L": [["0","1"]]
}"#,
    );
    let out = bin()
        .args(["genfun", "--input"])
        .arg(&job)
        .args(["--taylor-order", "3"])
        .output()
        .unwrap();
    let value = run_ok(&out);
    assert_eq!(value["terms"].as_array().unwrap().len(), 4);
    assert_eq!(value["taylor"]["coefficients"][0], "55/6");
}

#[test]
fn genfun_accepts_a_cone_payload() {
    let job = write_job(
        "quadrant-gf.json",
        r#"{
  "dim": 2,
  "cone": {"vertex": ["1/3","0"], "generators": [["1","0"],["0","1"]]},
  "L": [["0","1"]]
}"#,
    );
    let out = bin().args(["genfun", "--input"]).arg(&job).output().unwrap();
    let value = run_ok(&out);
    let terms = value["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["coeff"], "-1");
    // the slice sum starts at the first lattice line at or above x = 1/3
    assert_eq!(terms[0]["exponent"][0], "1");
}

#[test]
fn decompose_splits_off_unimodular_pieces() {
    let job = write_job(
        "wedge.json",
        r#"{
  "dim": 2,
  "cone": {"generators": [["1","0"],["1","2"]]}
}"#,
    );
    let out = bin().args(["decompose", "--input"]).arg(&job).output().unwrap();
    let value = run_ok(&out);
    let pieces = value["pieces"].as_array().unwrap();
    assert_eq!(pieces.len(), 2);
    assert_eq!(pieces[0]["sign"], 1);
    assert_eq!(pieces[0]["generators"], serde_json::json!([["1", "0"], ["0", "1"]]));
    assert_eq!(pieces[1]["generators"], serde_json::json!([["1", "2"], ["0", "-1"]]));
}

#[test]
fn decompose_along_a_subspace() {
    // splitting along the full plane keeps the cone as a single piece
    let job = write_job(
        "wedge-full.json",
        r#"{
  "dim": 2,
  "cone": {"generators": [["1","0"],["1","2"]]},
  "L": [["1","0"],["0","1"]]
}"#,
    );
    let out = bin().args(["decompose", "--input"]).arg(&job).output().unwrap();
    let value = run_ok(&out);
    assert_eq!(value["pieces"].as_array().unwrap().len(), 1);
    assert_eq!(value["pieces"][0]["sign"], 1);
}

#[test]
fn invalid_inputs_exit_with_validation_status() {
    // malformed JSON
    let job = write_job("broken.json", "{ not json");
    let out = bin().args(["ehrhart", "--input"]).arg(&job).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // a square pyramid has a four-edge apex, which the simple-vertex
    // pipeline rejects
    let job = write_job(
        "pyramid.json",
        r#"{
  "dim": 3,
  "polytope": {"vertices": [["0","0","0"],["1","0","0"],["0","1","0"],["1","1","0"],["0","0","1"]]},
  "L": [["0","0","1"]]
}"#,
    );
    let out = bin().args(["genfun", "--input"]).arg(&job).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // dependent subspace basis
    let job = write_job(
        "dependent.json",
        r#"{
  "dim": 2,
  "polytope": {"vertices": [["0","0"],["1","0"],["0","1"]]},
  "L": [["1","0"],["2","0"]]
}"#,
    );
    let out = bin().args(["ehrhart", "--input"]).arg(&job).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // zero worker count
    let job = write_job("square-jobs.json", SQUARE_JOB);
    let out = bin()
        .args(["ehrhart", "--input"])
        .arg(&job)
        .args(["--jobs", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_rejects_nonpositive_samples() {
    let job = write_job("square-neg.json", SQUARE_JOB);
    let qp_path = tmp("square-neg-qp.json");
    let out = bin()
        .args(["ehrhart", "--input"])
        .arg(&job)
        .arg("--output")
        .arg(&qp_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .args(["eval", "--input"])
        .arg(&qp_path)
        .args(["--samples", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
