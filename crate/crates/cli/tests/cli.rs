use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn alasso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alasso"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_line(out: &Output) -> Value {
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(err.lines().count(), 1, "stderr: {err}");
    serde_json::from_str(err.trim()).expect("error line is JSON")
}

#[test]
fn dist_reports_atom_of_first_figure() {
    let v = json_of(&alasso(&["dist", "--n", "10", "--theta", "0.1", "--mu", "0.05", "--grid", "-4:4:401"]));
    let loc = v["result"]["atom_location"].as_f64().unwrap();
    assert!((loc + 0.3162).abs() < 5e-5);
    assert_eq!(v["result"]["points"].as_array().unwrap().len(), 401);
    assert_eq!(v["meta"]["command"], "dist");
    assert_eq!(v["meta"]["params"]["n"], 10);
}

#[test]
fn selprob_value() {
    let v = json_of(&alasso(&["selprob", "--n", "100", "--theta", "0", "--mu", "0.1"]));
    let p = v["result"]["probability"].as_f64().unwrap();
    assert!((p - 0.682689).abs() < 5e-7);
}

#[test]
fn limit_classifies_regime() {
    let v = json_of(&alasso(&[
        "limit", "--mu-coef", "1", "--mu-exp", "0.333", "--theta-coef", "0.5", "--theta-exp", "0.333",
    ]));
    assert_eq!(v["result"]["regime"]["kind"], "consistent");
    assert_eq!(v["result"]["law"]["tag"], "escape_pos");
    let v = json_of(&alasso(&["limit", "--mu-rule", "n^-1/4", "--theta-coef", "2"]));
    assert_eq!(v["result"]["law"]["tag"], "shifted_normal");
    assert_eq!(v["result"]["law"]["shift"].as_f64(), Some(0.5));
    let v = json_of(&alasso(&["limit", "--mu-rule", "n^-1/3", "--theta-edge", "-1:0.5"]));
    assert_eq!(v["result"]["selection"]["case"], "on_boundary");
}

#[test]
fn estimate_location_and_regression() {
    let v = json_of(&alasso(&["estimate", "--y-bar", "0.2", "--mu", "0.05"]));
    assert!((v["result"]["estimate"].as_f64().unwrap() - 0.1875).abs() < 1e-15);

    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    let mut text = String::from("x1,x2,y\n");
    for i in 0..40 {
        let (a, b) = ((i % 7) as f64 - 3.0, ((i * 3) % 5) as f64 - 2.0);
        text.push_str(&format!("{a},{b},{}\n", 2.0 * a + 0.05 * (i as f64 * 1.3).sin()));
    }
    fs::write(&data, text).unwrap();
    let v = json_of(&alasso(&["estimate", "--data", data.to_str().unwrap(), "--mu", "0.3"]));
    let est = &v["result"]["fit"]["estimate"];
    assert!((est[0].as_f64().unwrap() - 2.0).abs() < 0.05);
    assert_eq!(est[1].as_f64(), Some(0.0));
    let v = json_of(&alasso(&["estimate", "--data", data.to_str().unwrap(), "--cv", "--folds", "5"]));
    assert!(v["result"]["cross_validation"]["mu"].as_f64().unwrap() > 0.0);
}

#[test]
fn rate_rows() {
    let v = json_of(&alasso(&["rate", "--mu-rule", "3*n^-1/2", "--n", "100"]));
    let a_n = v["result"]["rows"][0]["a_n"].as_f64().unwrap();
    assert!((a_n - 10.0 / 3.0).abs() < 1e-12);
}

#[test]
fn validate_passes() {
    let out = alasso(&["validate"]);
    let v = json_of(&out);
    assert_eq!(v["result"]["passed"], true);
}

fn replay_is_identical(args: &[&str], file: &str) {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join(file);
    let second = dir.path().join(format!("again_{file}"));
    let mut a: Vec<&str> = args.to_vec();
    a.extend(["--out", first.to_str().unwrap()]);
    assert!(alasso(&a).status.success());
    let out = alasso(&["--config", first.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn config_round_trip() {
    replay_is_identical(&["dist", "--n", "10", "--theta", "0.1", "--mu", "0.05", "--grid", "-1:1:11"], "d.json");
    replay_is_identical(&["--seed", "7", "limit", "--mu-rule", "n^-1/2", "--theta-coef", "-2", "--theta-exp", "0.5"], "l.json");
    replay_is_identical(
        &["--seed", "3", "impossibility", "--t", "0", "--n", "100", "--mu", "0.1", "--reps", "50", "--grid-size", "9"],
        "i.json",
    );
    replay_is_identical(&["--seed", "5", "montecarlo", "--reps", "20", "--gamma", "1", "--rho", "-0.2"], "m.json");
    replay_is_identical(&["--format", "csv", "selprob", "--n", "100", "--theta", "0.3", "--mu", "0.1"], "s.csv");
}

#[test]
fn csv_output_is_deterministic_with_lf_endings() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let base = dir.path().join(name);
        let out = alasso(&[
            "--format", "csv", "--seed", "11", "--out", base.to_str().unwrap(),
            "montecarlo", "--reps", "30", "--tuning", "fixed:0.2",
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        (1..=4)
            .map(|j| fs::read(dir.path().join(format!("{}_component{j}.csv", Path::new(name).file_stem().unwrap().to_str().unwrap()))).unwrap())
            .collect::<Vec<_>>()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b);
    let text = String::from_utf8(a[2].clone()).unwrap();
    assert!(!text.contains('\r'));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "replication,estimate,centered_scaled,is_zero,mu_used");
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 31);
    assert!(dir.path().join("a_summary.json").exists());
}

#[test]
fn usage_errors_exit_one_with_one_line() {
    let out = alasso(&["dist", "--n", "10", "--bogus", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_line(&out)["error"]["kind"], "usage");

    let out = alasso(&["impossibility", "--t", "0", "--n", "100", "--mu", "0.1", "--epsilon", "0.9"]);
    assert_eq!(out.status.code(), Some(1));
    error_line(&out);

    let out = alasso(&["limit", "--mu-rule", "n^-1/2", "--scale", "inv-mu"]);
    assert_eq!(out.status.code(), Some(1));
    error_line(&out);

    let out = alasso(&["--out", "/nonexistent/dir/x.json", "selprob", "--n", "1", "--theta", "0", "--mu", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_line(&out)["error"]["kind"], "io");

    let out = alasso(&[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unresolved_boundary_exits_two() {
    let out = alasso(&["limit", "--mu-rule", "n^-1/3", "--theta-coef", "1.0000000000001", "--theta-exp", "0.3333333333333333"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(error_line(&out)["error"]["kind"], "numerical");
}
