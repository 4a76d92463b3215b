use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.display().to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn densecode(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_densecode")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn payload(args: &[&str]) -> Value {
    let r = densecode(args);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report["command"], args[0]);
    assert_eq!(report["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["input_digest"].as_str().unwrap().len(), 64);
    report["payload"].clone()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

const CORPUS: [&str; 6] =
    ["bell.json", "uniform2.json", "partial.json", "rotated_bell.json", "single_violation3.json", "generic3.json"];

#[test]
fn analyze_bell() {
    let p = payload(&["analyze", &data("bell.json")]);
    assert_eq!(p["perfectly_preparable"], true);
    assert_eq!(p["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn bound_uniform2() {
    let p = payload(&["bound", &data("uniform2.json")]);
    assert!((f(&p["bound"]) - 0.5).abs() < 1e-12);
    assert!((f(&p["achieved"]) - 0.5).abs() < 1e-12);
    assert_eq!(p["pair"], serde_json::json!([0, 1]));
}

#[test]
fn bound_single_violation_d3() {
    let p = payload(&["bound", &data("single_violation3.json"), "--pair", "1,0"]);
    assert!((f(&p["bound"]) - 0.625).abs() < 1e-12);
    let spectrum: Vec<f64> = p["spectrum"].as_array().unwrap().iter().map(f).collect();
    for (a, b) in spectrum.iter().zip([1.6, 1.0, 0.4]) {
        assert!((a - b).abs() < 1e-12);
    }
    assert_eq!(densecode(&["bound", &data("single_violation3.json"), "--pair", "0,2"]).code, 2);
}

#[test]
fn bound_on_bell_is_a_precondition_failure() {
    let r = densecode(&["bound", &data("bell.json")]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
    assert!(r.stderr.contains("found 0"), "{}", r.stderr);
}

#[test]
fn input_errors_exit_one() {
    let r = densecode(&["analyze", &data("bad_length.json")]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("expected 4 amplitudes, found 3"), "{}", r.stderr);

    let r = densecode(&["analyze", &data("not_normalized.json")]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("deviation 5e-1"), "{}", r.stderr);

    assert_eq!(densecode(&["analyze", &data("missing.json")]).code, 1);
    assert_eq!(densecode(&["analyze"]).code, 1);
    assert_eq!(densecode(&["optimize", &data("bell.json"), "--method", "simplex"]).code, 1);
}

#[test]
fn malformed_json_names_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"d\": 2,\n \"matrix\": [[1, 0], [0]]}").unwrap();
    let r = densecode(&["analyze", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
}

#[test]
fn analyze_and_plan_agree_on_corpus() {
    for name in CORPUS {
        let a = payload(&["analyze", &data(name)]);
        let p = payload(&["plan", &data(name)]);
        assert_eq!(a["perfectly_preparable"], p["is_perfect"], "{name}");
        assert!(f(&p["completeness_error"]) < 1e-8, "{name}");
    }
}

#[test]
fn plan_and_baseline_values() {
    let p = payload(&["plan", &data("partial.json")]);
    assert!((f(&p["success_prob"]) - 1.0).abs() < 1e-9);
    let b = payload(&["baseline", &data("partial.json")]);
    assert!((f(&b["success_prob"]) - 2.0 / 3.0).abs() < 1e-9);
    let p = payload(&["plan", &data("rotated_bell.json")]);
    assert_eq!(p["is_perfect"], true);
}

#[test]
fn schmidt_bell() {
    let p = payload(&["schmidt", &data("rotated_bell.json")]);
    for l in p["lambdas"].as_array().unwrap() {
        assert!((f(l) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
    }
    assert!((f(&p["entropy"]) - 1.0).abs() < 1e-9);
}

#[test]
fn simulate_with_shared_override() {
    let p = payload(&["simulate", &data("uniform2.json"), "--trials", "20000", "--seed", "9"]);
    assert!((f(&p["analytic_prob"]) - 0.5).abs() < 1e-12);
    assert!((f(&p["empirical_prob"]) - 0.5).abs() < f(&p["ci_halfwidth"]));

    let s = data("shared_skewed.json");
    let p = payload(&["simulate", &data("uniform2.json"), "--trials", "20000", "--shared", &s]);
    // Weights (0.8, 0.2): (Σ_j 1/(4 p_j))⁻¹.
    assert!((f(&p["analytic_prob"]) - 0.32).abs() < 1e-9);
    assert!((f(&p["mean_success_fidelity"]) - 1.0).abs() < 1e-9);

    let r = densecode(&["simulate", &data("bell.json"), "--shared", &data("shared_infeasible.json")]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    assert_eq!(densecode(&["simulate", &data("bell.json"), "--trials", "0"]).code, 2);
}

#[test]
fn optimize_methods() {
    let nm = payload(&["optimize", &data("uniform2.json")]);
    assert_eq!(nm["method"], "nelder-mead");
    assert!((f(&nm["best_prob"]) - 0.5).abs() < 1e-6);
    let grid = payload(&["optimize", &data("generic3.json"), "--method", "grid", "--budget", "500"]);
    assert!(grid["evaluations"].as_u64().unwrap() <= 500);
    let r = densecode(&["optimize", &data("generic3.json"), "--budget", "0"]);
    assert_eq!(r.code, 2);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec!["simulate", "uniform2.json", "--seed", "17", "--trials", "5000"],
        vec!["optimize", "generic3.json"],
        vec!["plan", "generic3.json", "--output", "text"],
    ] {
        let mut args: Vec<String> = args.into_iter().map(str::to_owned).collect();
        args[1] = data(&args[1]);
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = densecode(&refs);
        let b = densecode(&refs);
        assert_eq!(a.code, 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn numbers_round_trip_through_report() {
    let r = densecode(&["plan", &data("generic3.json")]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let again = serde_json::to_string_pretty(&v).unwrap();
    assert_eq!(again, r.stdout.trim_end());
}

#[test]
fn text_output() {
    let r = densecode(&["baseline", &data("uniform2.json"), "--output", "text"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("command = baseline\n"));
    assert!(r.stdout.contains("success_prob = 0.5"));
}
