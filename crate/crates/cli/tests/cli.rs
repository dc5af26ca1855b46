use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schatten"))
        .args(args)
        .env_remove("SCHATTEN_WORKERS")
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON record per line"))
        .collect()
}

#[test]
fn verify_identities_passes() {
    let out = run(&["verify", "--suite", "identities", "--n", "2", "--p", "2", "--ensemble", "2,1,0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    assert_eq!(recs[0]["record"], "header");
    assert_eq!(recs[0]["schema"], "schatten-run/1");
    assert_eq!(recs[0]["config"]["command"]["suite"], "identities");
    let checks: Vec<&Value> = recs.iter().filter(|r| r["record"] == "check").collect();
    assert!(checks.iter().any(|r| r["claim_id"] == "ibp.identity_xi2_f1"));
    assert!(checks.iter().all(|r| r["pass"] == true && r["reference"].is_string()));
}

#[test]
fn verify_reports_failure_with_exit_one() {
    // the unit-volume second moment sits below its band for every small ball
    let out = run(&["verify", "--suite", "thinshell", "--n", "2", "--p", "2", "--ensemble", "2,1,0", "--budget-scale", "0.05"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(records(&out).iter().any(|r| r["claim_id"] == "volume.normalized_second_moment" && r["pass"] == false));
}

#[test]
fn gamma_example() {
    let out = run(&["gamma", "--d", "4", "--p", "2", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let v = recs[1]["value"].as_f64().unwrap();
    assert!((v - 1.0 / 3.0).abs() < 1e-15);
    assert!(String::from_utf8_lossy(&out.stdout).contains("0.3333"));
}

#[test]
fn estimate_sigma_example() {
    let out = run(&["estimate", "sigma", "--field", "R", "--subspace", "full", "--n", "2", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let s = recs[1]["sigma_sq"].as_f64().unwrap();
    assert!((s - 0.5).abs() < 0.05, "{s}");
    assert_eq!(recs[1]["record"], "sigma");
}

#[test]
fn estimate_moment_quadrature_at_infinity() {
    let out = run(&["estimate", "moment", "--n", "2", "--p", "inf", "--functional", "norm2^2"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs[1]["p"], "inf");
    assert_eq!(recs[1]["method"], "quadrature");
    // cube gas (2,1,0), n = 2: M(|x|²)/M(1) = 2·d/(2d + n) = 0.8
    assert!((recs[1]["value"].as_f64().unwrap() - 0.8).abs() < 1e-9);
}

#[test]
fn usage_and_domain_errors_exit_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["gamma", "--d", "4", "--p", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["estimate", "moment", "--p", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["estimate", "moment", "--ensemble", "2,1"]).status.code(), Some(2));
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["--seed", "42", "sweep", "--ensembles", "2,1,0", "--ns", "2,3", "--ps", "2,inf", "--samples", "500", "--burn-in", "100"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let recs = records(&a);
    assert!(recs.iter().any(|r| r["quantity"] == "sigma_sq"));
    assert_eq!(recs.iter().filter(|r| r["record"] == "row").count(), 2 * 2 * 7);
    let c = run(&["--seed", "43", "sweep", "--ensembles", "2,1,0", "--ns", "2,3", "--ps", "2,inf", "--samples", "500", "--burn-in", "100"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn worker_count_does_not_change_output() {
    let args = ["--seed", "5", "estimate", "var", "--n", "4", "--p", "3", "--samples", "2000"];
    let one = Command::new(env!("CARGO_BIN_EXE_schatten")).args(args).env("SCHATTEN_WORKERS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_schatten")).args(args).env("SCHATTEN_WORKERS", "3").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn csv_output_and_file_sink() {
    let dir = std::env::temp_dir().join(format!("schatten-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("points.csv");
    let out = run(&[
        "--format", "csv", "--output", path.to_str().unwrap(),
        "sample", "--n", "3", "--p", "inf", "--chains", "2", "--samples", "5", "--burn-in", "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# {"));
    assert_eq!(lines[1], "chain,index,record,x");
    assert_eq!(lines.len(), 2 + 10);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn hit_and_run_singular_values() {
    let out = run(&[
        "sample", "--sampler", "hit-and-run", "--field", "C", "--subspace", "antisym", "--n", "3", "--p", "inf",
        "--chains", "1", "--samples", "3", "--burn-in", "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for r in &records(&out)[1..] {
        let s: Vec<f64> = r["singular_values"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        assert!(s[0] <= 1.0 + 1e-12);
        assert!((s[0] - s[1]).abs() < 1e-10 && s[2] < 1e-10);
    }
}

#[test]
fn oracle_failure_exits_three() {
    // a zero tolerance can never be certified by successive refinement
    let out = run(&["estimate", "moment", "--n", "3", "--p", "1", "--ensemble", "1,2,0", "--functional", "kernel1,0.5", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("oracle failure"));
}
