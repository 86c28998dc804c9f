use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gleason-lab"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn interval_model_passes() {
    let out = run(&["check-axioms", data("interval3.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["command"], "check-axioms");
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 6);
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert!(r["generated_at"].is_string());
}

#[test]
fn cancellation_failure_exits_one_with_witness() {
    let out = run(&["check-axioms", data("broken_cancellation.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let w = &r["details"]["witnesses"][0];
    assert_eq!(w["axiom"], "GEiv");
    assert_eq!(w["elements"], serde_json::json!(["a", "a", "b"]));
}

#[test]
fn subset_verdict_is_reported() {
    let model = data("interval3.json");
    let out = run(&["check-axioms", model.to_str().unwrap(), "--subset", "0,1,2", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["details"]["subset"]["holds"], false);
    assert_eq!(r["details"]["subset"]["witness"], serde_json::json!(["1", "2", "3"]));
}

#[test]
fn malformed_inputs_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"elements":["0","a"],"zero":"0","sums":[["a","a","b"]]}"#).unwrap();
    let out = run(&["check-axioms", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sums"), "{}", stderr(&out));

    let out = run(&["classify", "--seq", r#"{"family":"power"}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`p`"), "{}", stderr(&out));

    let out = run(&["ext", "--measure", r#"{"regular":{"matrix":[[1,2],[3,1]]},"singular":"none"}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("regular"), "{}", stderr(&out));

    let out = run(&["classify", "--seq", r#"{"family":"power","p":-1}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unbounded"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_two_and_help_exits_zero() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["gleason", "--instances", "many"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn classify_case_three_and_four() {
    let out = run(&[
        "classify",
        "--seq",
        r#"{"family":"signed_merge","pos":{"family":"constant","c":1},"neg":{"family":"power","p":2}}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["details"]["frame_type"]["class"], "FrameTypeInfiniteWeight");
    assert_eq!(r["details"]["is_frame_type"], true);

    let out = run(&["classify", "--seq", r#"{"family":"alternating_power","p":0}"#, "--mode", "heuristic"]);
    let r = json(&out);
    assert_eq!(r["details"]["summability"]["class"], "Oscillates");
    assert_eq!(r["details"]["is_frame_type"], false);
}

#[test]
fn rearrange_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = run(&[
        "rearrange",
        "--seq",
        r#"{"family":"alternating_power","p":1}"#,
        "--target",
        "-5",
        "--steps",
        "200000",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().count(), 200_001);
    assert!(text.starts_with("step,index,partial_sum\n1,1,-1\n"));

    let out = run(&["rearrange", "--seq", r#"{"family":"power","p":2}"#, "--target", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn demo_nonsub_reports_violation() {
    let out = run(&["demo-nonsub", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["details"]["violation"], serde_json::json!(["m1", "m2", "m1+m2"]));
    assert_eq!(r["details"]["induced_model"]["elements"].as_array().unwrap().len(), 4);

    let out = run(&["demo-nonsub", "--variant", "trace-class-control"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["details"]["violation"].is_null());
}

#[test]
fn ext_partial_sum_and_value() {
    let a = r#"{"regular":"none","singular":{"domain":"a"},"domain":"a"}"#;
    let b = r#"{"regular":"none","singular":{"domain":"b"},"domain":"b"}"#;
    let out = run(&["ext", "--measure", a, "--other", b, "--index-set", r#"{"kind":"finite","indices":[1,2]}"#]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["details"]["sum"]["status"], "undefined");
    assert_eq!(r["details"]["value"]["value"], 0.0);

    let out = run(&["ext", "--measure", data("singular_measure.json").to_str().unwrap(), "--other", a]);
    let r = json(&out);
    assert_eq!(r["details"]["sum"]["status"], "defined");
    assert_eq!(r["details"]["decision"]["verdict"], "sigma_additive");
}

#[test]
fn sobolev_writes_table_next_to_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sob.json");
    let out = run(&["sobolev", "--grids", "10,20,40", "--nmax", "10", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    let table = std::fs::read_to_string(dir.path().join("sob_table.csv")).unwrap();
    assert_eq!(table.lines().next(), Some("h,norm,slope"));
    assert_eq!(table.lines().count(), 4);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["gleason", "--instances", "40", "--seed", "9", "--no-timestamp"];
    let a = run(&args);
    let b = bin().args(args).env("GLEASON_LAB_THREADS", "1").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 9);
}

#[test]
fn csv_format() {
    let out = run(&["frame", "--instances", "10", "--polarization", "10", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("claim,source,lhs,rhs,tolerance,pass\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn nikodym_small_run() {
    let out = run(&["nikodym", "--pairs", "5", "--nmax", "20", "--samples", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["details"]["instances"], 5);
}

#[test]
fn generator_as_measure_object() {
    let out = run(&["gleason", "--instances", "5", "--generator", r#"{"T": [[0.5, [0, 0.5]], [[0, -0.5], 0.5]]}"#]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["details"]["is_state"], true);
    assert!((r["details"]["total"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let out = run(&["frame", "--instances", "5", "--polarization", "5", "--generator", r#"{"S": [[1]]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`T`"));
}
