use std::path::PathBuf;
use std::process::{Command, Output};

fn examples() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn stringykit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stringykit"))
        .args(args)
        .env("STRINGYKIT_JOBS", "2")
        .output()
        .expect("binary runs")
}

fn job(name: &str) -> String {
    examples().join(format!("{name}.json")).display().to_string()
}

fn matches_expected(name: &str) {
    let out = stringykit(&["report", &job(name)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let expected = std::fs::read_to_string(examples().join("expected").join(format!("{name}.json"))).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "report for {name} drifted");
}

#[test]
fn ray_report() {
    matches_expected("ray");
}

#[test]
fn segment_report() {
    matches_expected("segment");
}

#[test]
fn quadrant_report() {
    matches_expected("quadrant");
}

#[test]
fn square_report() {
    matches_expected("square");
}

#[test]
fn projective_plane_report() {
    matches_expected("p2");
}

#[test]
fn wrong_expectation_exits_one() {
    let out = stringykit(&["report", &job("corrupted")]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], "fail");
}

#[test]
fn zero_coefficients_exit_two() {
    let out = stringykit(&["verify", "thm-main", &job("degenerate")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn malformed_job_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"rays\": [[1, 0],\n").unwrap();
    let out = stringykit(&["inspect", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line "));
}

#[test]
fn report_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("segment.json");
    let out = stringykit(&["report", &job("segment"), "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let expected = std::fs::read_to_string(examples().join("expected/segment.json")).unwrap();
    assert_eq!(std::fs::read_to_string(path).unwrap(), expected);
}

#[test]
fn inspect_square() {
    let out = stringykit(&["inspect", &job("square")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["eulerian"], true);
    assert_eq!(v["faces"].as_array().unwrap().len(), 10);
}

#[test]
fn hilbert_and_r1_on_segment() {
    let out = stringykit(&["r1", &job("segment")]);
    assert_eq!(out.status.code(), Some(0));
    let graded: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let out = stringykit(&["r1", "--hat", &job("segment")]);
    assert_eq!(out.status.code(), Some(0));
    let filtered: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dims = |v: &serde_json::Value| v.as_array().unwrap().iter().map(|f| f["dims"].clone()).collect::<Vec<_>>();
    assert_eq!(dims(&graded), dims(&filtered));
    let out = stringykit(&["hilbert", "--dual", "--max-degree", "4", &job("segment")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn dhat_cohomology_on_segment() {
    let out = stringykit(&["cohomology", "--differential", "dhat", &job("segment")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dims"], serde_json::json!({"2": 2}));
}
