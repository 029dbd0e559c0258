//! End-to-end runs of the command-line binary.

use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quasimetric"))
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = bin().args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (
        out.status.code().unwrap(),
        report,
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_two_points() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.csv");
    std::fs::write(&input, "0,1\n1,0\n").unwrap();
    let (code, r, _) = run(&["analyze", "--input", path(&input)]);
    assert_eq!(code, 0);
    assert_eq!(r["n"], 2);
    assert_eq!(r["K"], "1");
    assert_eq!(r["C"], "1/2");
    assert_eq!(r["is_metric"], true);
    assert_eq!(r["mode"], "exact");
    assert_eq!(r["command"], "analyze");
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn metrize_shortcut() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.csv");
    let output = dir.path().join("d.csv");
    std::fs::write(&input, "0,1,3\n1,0,1\n3,1,0\n").unwrap();
    let (code, r, _) = run(&[
        "metrize",
        "--input",
        path(&input),
        "--output",
        path(&output),
        "--oracle",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        std::fs::read_to_string(&output).unwrap(),
        "0,1,2\n1,0,1\n2,1,0\n"
    );
    assert_eq!(r["K"], "3");
    assert_eq!(r["applicable"], false);
    assert_eq!(r["lower_ok"], true);
    assert_eq!(r["upper_ok"], true);
    assert_eq!(r["min_ratio"], "2/3");
    assert_eq!(r["argmin_pair"], serde_json::json!([0, 2]));
    assert_eq!(r["oracle"]["agrees"], true);
}

#[test]
fn validation_errors_name_the_axiom() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.csv");
    std::fs::write(&input, "0,1\n2,0\n").unwrap();
    let (code, _, err) = run(&["analyze", "--input", path(&input)]);
    assert_eq!(code, 1);
    assert!(err.contains("axiom (2)"), "{err}");

    std::fs::write(&input, "0,1\n1,x\n").unwrap();
    let (code, _, err) = run(&["analyze", "--input", path(&input)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn labels_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.csv");
    let labels = dir.path().join("labels.txt");
    std::fs::write(&input, "0,1\n1,0\n").unwrap();
    std::fs::write(&labels, "A\nB\n").unwrap();
    let (code, r, _) = run(&[
        "analyze",
        "--input",
        path(&input),
        "--labels",
        path(&labels),
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["labels"], serde_json::json!(["A", "B"]));
}

#[test]
fn snowflake_command() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.csv");
    let output = dir.path().join("s.csv");
    std::fs::write(&input, "0,1,3\n1,0,2\n3,2,0\n").unwrap();
    let (code, r, _) = run(&[
        "snowflake",
        "--input",
        path(&input),
        "--p",
        "2",
        "--output",
        path(&output),
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        std::fs::read_to_string(&output).unwrap(),
        "0,1,9\n1,0,4\n9,4,0\n"
    );
    assert_eq!(r["K_before"], "3/2");
    assert_eq!(r["K_after"], "9/4");
    assert_eq!(r["power_bound"], "4");
    assert_eq!(r["within_power_bound"], true);

    let (code, _, err) = run(&[
        "snowflake",
        "--input",
        path(&input),
        "--p",
        "0.5",
        "--output",
        path(&output),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("exact mode"), "{err}");

    std::fs::write(&input, "0,1.0\n1.0,0\n").unwrap();
    let (code, r, _) = run(&[
        "snowflake",
        "--input",
        path(&input),
        "--p",
        "0.5",
        "--output",
        path(&output),
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["mode"], "float");
}

#[test]
fn dyadic_report_sections() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let (code, r, _) = run(&[
        "dyadic",
        "--a",
        "2/5",
        "--depth",
        "3",
        "--check-facts",
        "--ratios",
        "--collapse",
        "--emit-matrix",
        path(&out),
        "--tent",
        "3/8",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["point_count"], 9);
    assert_eq!(r["facts"]["all_passed"], true);
    assert_eq!(r["ratios"]["max_ratio"], "125/86");
    assert_eq!(r["ratios"]["within_bound"], true);
    assert_eq!(r["collapse"]["rows"][2]["distance"], "64/125");
    assert_eq!(r["collapse"]["bound_holds"], true);
    assert_eq!(r["tent"]["csv"], "0,0\n1/4,2\n3/8,3\n1/2,1\n1,0\n");
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 9);
}

#[test]
fn dyadic_depth_guard() {
    let (code, _, err) = run(&["dyadic", "--a", "2/5", "--depth", "13", "--collapse"]);
    assert_eq!(code, 1);
    assert!(err.contains("--allow-deep"));
    // Without matrix work, deep depths are fine.
    let (code, r, _) = run(&["dyadic", "--a", "1/2", "--depth", "20"]);
    assert_eq!(code, 0);
    assert_eq!(r["tau"][19], "1");
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let first = bin()
        .args([
            "gen",
            "--kind",
            "perturbed",
            "--n",
            "7",
            "--seed",
            "3",
            "--delta",
            "0.4",
            "--output",
            path(&a),
        ])
        .output()
        .unwrap();
    let second = bin()
        .args([
            "gen",
            "--kind",
            "perturbed",
            "--n",
            "7",
            "--seed",
            "3",
            "--delta",
            "0.4",
            "--output",
            path(&b),
        ])
        .output()
        .unwrap();
    assert!(first.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let strip = |bytes: &[u8]| {
        let mut v: Value = serde_json::from_slice(bytes).unwrap();
        v["output"] = Value::Null;
        v
    };
    assert_eq!(strip(&first.stdout), strip(&second.stdout));

    let r1 = bin()
        .args(["analyze", "--input", path(&a)])
        .output()
        .unwrap();
    let r2 = bin()
        .args(["analyze", "--input", path(&b)])
        .output()
        .unwrap();
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn unknown_flag_exit_code() {
    let (code, _, _) = run(&[
        "gen",
        "--kind",
        "ultrametric",
        "--n",
        "3",
        "--seed",
        "1",
        "--output",
        "x",
        "--extra",
    ]);
    assert_eq!(code, 2);
}
