//! Command-line behaviour: exit codes, outputs and diagnostics.

mod common;

use std::f64::consts::PI;
use std::fs;

use fieldcover::cli::{run_with, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK, EXIT_USAGE};
use fieldcover::io::{read_plan, recompute_metrics, PlanFile};
use serde_json::Value;

use common::fixture_dir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("fieldcover").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn fixture(name: &str) -> String {
    fixture_dir()
        .join(format!("{name}.field.json"))
        .to_string_lossy()
        .into_owned()
}

#[test]
fn help_and_version_succeed() {
    let help = run(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("plan"));
    assert_eq!(run(&["--version"]).code, EXIT_OK);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&[]).code, EXIT_USAGE);
    assert_eq!(
        run(&["plan", &fixture("demo"), "--mode", "sideways"]).code,
        EXIT_USAGE
    );
    let r = run(&["plan", &fixture("demo"), "--mode", "global", "--bogus"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(!r.stderr.is_empty());
}

#[test]
fn input_errors_exit_two() {
    let r = run(&["plan", "/nonexistent/field.json", "--mode", "global"]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.stderr.contains("/nonexistent/field.json"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.field.json");
    fs::write(&bad, r#"{"schema_version": 1, "boundary": [[0,0],[1,0]]"#).unwrap();
    let r = run(&["decompose", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.stderr.contains("line"), "{}", r.stderr);

    let r = run(&[
        "plan",
        &fixture("demo"),
        "--mode",
        "global",
        "--headland-margin=-1",
    ]);
    assert_eq!(r.code, EXIT_INPUT);
}

#[test]
fn infeasible_global_plan_exits_three() {
    let r = run(&["plan", &fixture("infeasible"), "--mode", "global"]);
    assert_eq!(r.code, EXIT_INFEASIBLE, "{}", r.stderr);
    assert!(r.stderr.contains("isolated"));
    // the traditional planner still succeeds on the same field
    assert_eq!(
        run(&["plan", &fixture("infeasible"), "--mode", "traditional"]).code,
        EXIT_OK
    );
    assert_eq!(
        run(&["compare", &fixture("infeasible")]).code,
        EXIT_INFEASIBLE
    );
}

#[test]
fn single_cell_global_plan_on_stdout() {
    let r = run(&["plan", &fixture("single_cell"), "--mode", "global"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let file: PlanFile = serde_json::from_str(&r.stdout).unwrap();
    let expected = 1.0 + 3.0 * PI;
    assert!((file.plan.metrics.nonproductive_m - expected).abs() < 1e-9);
    assert_eq!(file.plan.track_order().len(), 4);
    let m = recompute_metrics(&file).unwrap();
    assert!((m.nonproductive_m - expected).abs() < 1e-9);
}

#[test]
fn outputs_are_written_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("plan.json");
    let svg = dir.path().join("plan.svg");
    let args = |o: &str, s: &str| {
        run(&[
            "plan",
            &fixture("demo"),
            "--mode",
            "traditional",
            "--out",
            o,
            "--svg",
            s,
        ])
        .code
    };
    assert_eq!(args(out.to_str().unwrap(), svg.to_str().unwrap()), EXIT_OK);
    let (first_json, first_svg) = (fs::read(&out).unwrap(), fs::read(&svg).unwrap());
    assert_eq!(args(out.to_str().unwrap(), svg.to_str().unwrap()), EXIT_OK);
    assert_eq!(fs::read(&out).unwrap(), first_json);
    assert_eq!(fs::read(&svg).unwrap(), first_svg);
    let plan = read_plan(&out).unwrap();
    assert_eq!(plan.options.seed, 0);
    assert!(String::from_utf8(first_svg)
        .unwrap()
        .contains(r#"id="plan""#));
}

#[test]
fn decompose_reports_cells() {
    let r = run(&["decompose", &fixture("demo")]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 7);
    let tracks: u64 = v["cells"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["tracks"].as_u64().unwrap())
        .sum();
    assert_eq!(tracks, 14);
}

#[test]
fn compare_reports_savings() {
    let r = run(&["compare", &fixture("diamond")]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let t = v["traditional"]["plan"]["metrics"]["nonproductive_m"]
        .as_f64()
        .unwrap();
    let g = v["global"]["plan"]["metrics"]["nonproductive_m"]
        .as_f64()
        .unwrap();
    let s = v["savings_ratio"].as_f64().unwrap();
    assert!(g <= t);
    assert!((s - (1.0 - g / t)).abs() < 1e-12);
}
