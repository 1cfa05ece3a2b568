use std::process::{Command, Output};

use serde_json::Value;

fn maslov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maslov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_seed_is_clean() {
    let out = maslov(&["verify", "--seed", "7", "--n", "2", "--kmax", "4", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["command"], "verify");
    assert_eq!(r["report"]["failed_claims"], 0);
    assert_eq!(r["report"]["records"][0]["seed"], 7);
    assert_eq!(r["report"]["records"][0]["bott"].as_array().unwrap().len(), 3);
}

#[test]
fn rotation_by_three_quarter_turn_has_unit_l0_index() {
    let out = maslov(&["index", "--B", "constant-identity", "--n", "1", "--tau", "4.712", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let suite = &report(&out)["report"]["suite"];
    assert_eq!(suite["l0"]["index"], 1);
    assert_eq!(suite["l0"]["nullity"], 0);
}

#[test]
fn selftest_passes() {
    let out = maslov(&["selftest", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["report"]["passed"], r["report"]["total"]);
}

#[test]
fn output_is_reproducible_across_worker_counts() {
    let base = ["verify", "--seed", "11", "--count", "4", "--n", "1", "--kmax", "3", "--no-timestamp"];
    let one = maslov(&[&base[..], &["--jobs", "1"]].concat());
    let three = maslov(&[&base[..], &["--jobs", "3"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(report(&one)["report"]["records"].as_array().unwrap().len(), 4);
}

#[test]
fn timestamp_is_present_unless_disabled() {
    let out = maslov(&["selftest"]);
    assert!(report(&out)["generated_at"].is_u64());
    let out = maslov(&["selftest", "--no-timestamp"]);
    assert!(report(&out).get("generated_at").is_none());
}

#[test]
fn orbit_writes_report_and_samples() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("orbit.json");
    let csv = dir.path().join("orbit.csv");
    let input = dir.path().join("input.json");
    std::fs::write(
        &input,
        r#"{"hamiltonian": {"kind": "quartic", "n": 1}, "T": 5.0, "q0": [1.0], "tolerances": {"period": 1e-6}}"#,
    )
    .unwrap();
    let out = maslov(&[
        "orbit",
        "--input",
        input.to_str().unwrap(),
        "--output",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--no-timestamp",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let body = &r["report"];
    assert!(body["orbit"]["residual"].as_f64().unwrap() <= 1e-10);
    assert!((body["orbit"]["q0"][0].as_f64().unwrap() - 0.885627368002149).abs() < 1e-8);
    assert!(body["actions"]["phi"].as_f64().unwrap() < 0.0);
    assert_eq!(body["minimal_period"]["k"], 1);
    assert_eq!(body["certificate"]["morse"]["agree"], true);
    let samples = std::fs::read_to_string(&csv).unwrap();
    assert!(samples.starts_with("t,p0,q0\n"));
    assert_eq!(samples.lines().count(), 1 + 2 * 8192 + 1);
}

#[test]
fn singular_shooting_is_a_numerical_failure() {
    let out = maslov(&[
        "orbit",
        "--input",
        r#"{"hamiltonian": {"kind": "harmonic", "n": 1}, "T": 6.283185307179586, "q0": [1.0]}"#,
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn unknown_fields_and_flags_are_config_errors() {
    let out = maslov(&[
        "orbit",
        "--input",
        r#"{"hamiltonian": {"kind": "quartic", "n": 1}, "T": 5.0, "q0": [1.0], "colour": 1}"#,
    ]);
    assert_eq!(out.status.code(), Some(64));
    assert_eq!(maslov(&["index", "--no-such-flag"]).status.code(), Some(64));
    assert_eq!(maslov(&["index", "--B", "spiral"]).status.code(), Some(64));
    assert_eq!(maslov(&["verify", "--kmax", "9"]).status.code(), Some(64));
    assert_eq!(maslov(&["index", "--input", "/nonexistent/path.json"]).status.code(), Some(64));
}

#[test]
fn help_exits_cleanly() {
    let out = maslov(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("selftest"));
}

#[test]
fn failed_claims_exit_with_two() {
    // A rank threshold this coarse misjudges intersections, so identities break.
    let out = maslov(&["verify", "--seed", "3", "--n", "2", "--count", "3", "--tol-rank", "0.3", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["all_claims_hold"], false);
    assert!(r["report"]["failed_claims"].as_u64().unwrap() > 0);
}

#[test]
fn morse_reports_agree_for_rotation_and_pencil() {
    let out = maslov(&["morse", "--B", "constant-identity", "--tau", "4.71238898", "--modes", "32,64", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["report"]["l0_index"], 1);
    assert_eq!(r["report"]["conjugate_points"]["sum"], 1);

    let out = maslov(&["morse", "--input", r#"{"a": [[1, 0], [0, 2]], "b": [[3, 0], [0, 1]], "grid": 100}"#]);
    assert_eq!(out.status.code(), Some(0));
    let rm = &report(&out)["report"]["relative_morse"];
    assert_eq!(rm["index"], 1);
    assert_eq!(rm["oracle"], 1);
}

#[test]
fn path_json_round_trips_through_index() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path.json");
    std::fs::write(
        &path,
        r#"{"n": 1, "tau": 4.712, "kind": "constant", "coeffs": [[1.0, 0.0], [0.0, 1.0]]}"#,
    )
    .unwrap();
    let out = maslov(&["index", "--input", path.to_str().unwrap(), "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report(&out)["report"]["suite"]["l0"]["index"], 1);
}

#[test]
fn iterate_checks_the_bott_formula() {
    let out = maslov(&["iterate", "--k", "3", "--seed", "2", "--n", "1", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["report"]["k"], 3);
    assert!(r["report"]["bott"]["claims"].as_array().unwrap().iter().all(|c| c["satisfied"] == true));
}
