use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz-lab")).args(args).output().expect("binary runs")
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn check<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn norm_of_three_four_is_five() {
    let out = run(&["norm", "--phi", "power:2", "--values", "3,4"]);
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((r["values"]["value"].as_f64().unwrap() - 5.0).abs() < 1e-9);
    assert_eq!(r["pass"], true);
}

#[test]
fn bourdon_flags_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (json, csv) = (dir.path().join("b.json"), dir.path().join("b.csv"));
    let out = run(&[
        "bourdon", "--p", "2", "--kappa", "2", "--N", "100",
        "--out", json.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&json);
    assert_eq!(check(&r, "divergent_global")["pass"], true);
    assert_eq!(check(&r, "finite_piecewise")["pass"], true);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("n,modular,global_norm\n"));
    assert!(text.lines().count() >= 3);
}

#[test]
fn zigzag_on_torus_reports_two_classes() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("z.json");
    let out = run(&["zigzag", "--model", "torus", "--out", json.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&json);
    assert_eq!(r["values"]["h1_dim"], 2);
    assert_eq!(check(&r, "roundtrip")["pass"], true);
}

#[test]
fn config_files_and_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let toml = dir.path().join("run.toml");
    std::fs::write(&toml, "scenario = \"norm\"\n[params]\nphi = \"power:2\"\nvalues = [6.0, 8.0]\n").unwrap();
    let out = run(&["--config", toml.to_str().unwrap()]);
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((r["values"]["value"].as_f64().unwrap() - 10.0).abs() < 1e-9);

    // flags win over the file
    let out = run(&["--config", toml.to_str().unwrap(), "norm", "--values", "3,4"]);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((r["values"]["value"].as_f64().unwrap() - 5.0).abs() < 1e-9);

    let json = dir.path().join("run.json");
    std::fs::write(&json, r#"{"scenario": "bourdon", "params": {"N": 50, "p": 2.0}}"#).unwrap();
    let out = run(&["--config", json.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["values"]["params"]["n_max"], 50);
}

#[test]
fn reruns_are_identical_up_to_wall_time() {
    let strip = |o: Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("wall_time_s");
        serde_json::to_string(&v).unwrap()
    };
    let args = ["cohomology", "--complex", "random:30,4,3,9", "--phi", "log:2,2", "--seed", "5"];
    assert_eq!(strip(run(&args)), strip(run(&args)));
    let args = ["qi-check", "--seed", "5"];
    assert_eq!(strip(run(&args)), strip(run(&args)));
}

#[test]
fn exit_codes() {
    // a failed invariant
    assert_eq!(run(&["norm", "--values", "3,4", "--tol", "1e-15"]).status.code(), Some(1));
    // errors
    assert_eq!(run(&["cohomology"]).status.code(), Some(2));
    assert_eq!(run(&["norm", "--values", "1", "--phi", "power:0.5"]).status.code(), Some(2));
    assert_eq!(run(&["norm", "--values", "1", "--tol", "-1"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "scenario = \"norm\"\n[params]\nvalues = [1.0]\nbogus = 1\n").unwrap();
    assert_eq!(run(&["--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "bourdon"]).status.code(), Some(2));
    assert_eq!(run(&["--config", dir.path().join("missing.toml").to_str().unwrap()]).status.code(), Some(2));
}
