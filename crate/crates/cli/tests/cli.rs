use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn photoref(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_photoref"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn nls_run_writes_outputs_and_a_reproducing_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["propagate-nls", "--grid", "128,40", "--a", "-1", "--dt", "1e-3", "--T", "0.02", "--report-every", "5", "--init", "gaussian:1,2"];
    let mut first = args.to_vec();
    first.extend(["--out", "a.prf1", "--report", "a.csv"]);
    let out = photoref(d, &first);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(d.join("a.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("time,mass,energy,grad_sq,h1_ok"));
    assert_eq!(lines.count(), 5);

    let manifest = json(&d.join("a.prf1.manifest.json"));
    assert_eq!(manifest["command"], "propagate-nls");
    assert_eq!(manifest["config"]["numerics"]["dt"], 1e-3);
    assert_eq!(manifest["config"]["model"]["a"], -1);
    assert_eq!(manifest["outcome"]["status"], "ok");

    let again = photoref(d, &["propagate-nls", "--config", "a.prf1.manifest.json", "--out", "b.prf1", "--report", "b.csv"]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(std::fs::read(d.join("a.prf1")).unwrap(), std::fs::read(d.join("b.prf1")).unwrap());
    assert_eq!(csv, std::fs::read_to_string(d.join("b.csv")).unwrap());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("run.json"),
        r#"{"command": "propagate-nls", "numerics": {"dt": 0.01, "T": 0.05}, "grid": {"points": [64], "lengths": [20.0]}, "io": {"init": "gaussian:1,1"}}"#,
    )
    .unwrap();
    let out = photoref(d, &["propagate-nls", "--config", "run.json", "--dt", "0.005", "--report", "r.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let m = json(&d.join("r.csv.manifest.json"));
    assert_eq!(m["config"]["numerics"]["dt"], 0.005);
    assert_eq!(m["config"]["numerics"]["T"], 0.05);
    assert_eq!(std::fs::read_to_string(d.join("r.csv")).unwrap().lines().count(), 1 + 11);
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = photoref(d, &["propagate-nls", "--dt", "-1", "--init", "gaussian:1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dt must be finite and > 0"));
    assert_eq!(photoref(d, &["propagate-nls", "--grid", "100,40"]).status.code(), Some(1));
    assert_eq!(photoref(d, &["no-such-command"]).status.code(), Some(1));
    assert_eq!(photoref(d, &["verify", "--suite", "nope"]).status.code(), Some(1));
    std::fs::write(d.join("bad.json"), r#"{"command": "propagate-nls", "colour": 1}"#).unwrap();
    assert_eq!(photoref(d, &["propagate-nls", "--config", "bad.json"]).status.code(), Some(1));
    assert_eq!(photoref(d, &["--help"]).status.code(), Some(0));
}

#[test]
fn missing_ground_state_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = photoref(dir.path(), &["soliton", "radial", "--dim", "2", "--omega", "1.2", "--report", "r.json"]);
    assert_eq!(out.status.code(), Some(2));
    let m = json(&dir.path().join("r.json.manifest.json"));
    assert_eq!(m["outcome"]["exit_code"], 2);
}

#[test]
fn potential_round_trip_through_prf1() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = photoref(d, &["propagate-za", "--grid", "32,16,32,16", "--init", "gaussian:1,2", "--dt", "0.01", "--T", "0.02", "--out", "a.prf1", "--report", "za.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let header = std::fs::read_to_string(d.join("za.csv")).unwrap();
    assert!(header.starts_with("time,mass,bound_lhs,bound_rhs,solver_iters,residual\n"));

    let out = photoref(d, &["solve-potential", "--in", "a.prf1", "--tol", "1e-11", "--out", "phi.prf1", "--report", "phi.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&d.join("phi.json"));
    assert_eq!(r["bound_ok"], true);
    assert!(r["residual"].as_f64().unwrap() <= 1e-11);
    let phi = photoref::prf1::read_path(d.join("phi.prf1")).unwrap().into_real().unwrap();
    assert_eq!(phi.grid().points(), &[32, 32]);
}

#[test]
fn soliton_subcommands_emit_profiles_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = photoref(d, &["soliton", "bright", "--um", "1", "--n", "1024", "--out", "b.csv", "--report", "b.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&d.join("b.json"));
    assert!((r["omega"].as_f64().unwrap() - (1.0 - 2f64.ln())).abs() < 1e-14);
    assert_eq!(std::fs::read_to_string(d.join("b.csv")).unwrap().lines().count(), 1025);

    let out = photoref(d, &["soliton", "window", "--a", "-1", "--omega", "0.5", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["window"]["class"], "excluded");
    assert_eq!(v["window"]["clause"], "energy_defocusing");

    let out = photoref(d, &["soliton", "blp", "--omega", "0.5", "--report", "blp.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&d.join("blp.json"))["all_ok"], true);
}

#[test]
fn verify_reports_are_byte_identical_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for name in ["one.json", "two.json"] {
        let out = photoref(d, &["verify", "--suite", "nonexistence-window", "--seed", "11", "--out", name]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
    let one = std::fs::read(d.join("one.json")).unwrap();
    assert_eq!(one, std::fs::read(d.join("two.json")).unwrap());
    assert_eq!(json(&d.join("one.json"))["status"], "pass");
}
