//! End-to-end tests of the binary: exit-code contract, determinism of the
//! machine-readable output, and parse-error reporting.

use std::path::{Path, PathBuf};
use std::process::Command;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_witt-descent")
}

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(binary())
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn remark_scenario_decides_and_prints_the_verdict() {
    let path = scenario_path("remark.scn");
    let (code, stdout, _) = run(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("q descends, h does not"));
}

#[test]
fn erratum_scenario_reports_componentwise_contrast() {
    let path = scenario_path("erratum-system.scn");
    let (code, stdout, _) = run(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("componentwise: yes,yes; system: no"));
}

#[test]
fn decided_no_exits_zero() {
    let path = scenario_path("hermitian-negative.scn");
    let (code, stdout, _) = run(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 0, "a decided `no` is exit 0");
    assert!(stdout.contains("\"no\""));
}

#[test]
fn undecided_exits_two() {
    // metabolicity of a definite 4-dimensional system over Q: the witness
    // search cannot conclude either way
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("undecided.scn");
    std::fs::write(
        &path,
        r#"
[scenario]
task = "metabolic"
budget = 2000

[field]
field = "Q"

[object]
kind = "system"
over = "F"
form = "[1, 0, 0, 0; 0, 1, 0, 0; 0, 0, 1, 0; 0, 0, 0, 1]"
"#,
    )
    .unwrap();
    let (code, stdout, _) = run(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stdout.contains("undecided"));
}

#[test]
fn malformed_field_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.scn");
    std::fs::write(
        &path,
        "[scenario]\ntask = \"witt\"\n[field]\nfield = \"Fp(4)\"\n[object]\nkind = \"quadratic-form\"\ncoeffs = \"[1]\"\n",
    )
    .unwrap();
    let (code, _, stderr) = run(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("line 4"), "parse errors carry positions: {stderr}");
}

#[test]
fn excluded_case_is_a_semantic_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("excluded.scn");
    // skew-symmetric bilinear form over the base field itself: descend must
    // refuse with the excluded-case message
    std::fs::write(
        &path,
        r#"
[scenario]
task = "descend"

[field]
field = "Q"
ext = "sqrt(2)"

[object]
kind = "hermitian"
over = "K"
lambda = -1
gram = "[0, 1; -1, 0]"
"#,
    )
    .unwrap();
    let (code, _, stderr) = run(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("excluded"), "stderr: {stderr}");
}

#[test]
fn json_reports_are_deterministic_modulo_timing() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.ndjson");
    let out2 = dir.path().join("b.ndjson");
    let scn = scenario_path("quad-square-scaled.scn");
    for out in [&out1, &out2] {
        let (code, _, _) = run(&[
            "run",
            scn.to_str().unwrap(),
            "--seed",
            "9",
            "--json-out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    let normalize = |p: &PathBuf| -> String {
        let body = std::fs::read_to_string(p).unwrap();
        let mut lines = Vec::new();
        for line in body.lines() {
            let mut v: serde_json::Value = serde_json::from_str(line).unwrap();
            v.as_object_mut().unwrap().remove("timing_ms");
            lines.push(v.to_string());
        }
        lines.join("\n")
    };
    assert_eq!(normalize(&out1), normalize(&out2));
}

#[test]
fn parallel_jobs_preserve_report_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("multi.ndjson");
    let a = scenario_path("witt-rational.scn");
    let b = scenario_path("metabolic-plane.scn");
    let c = scenario_path("quaternion-cor-nonsplit.scn");
    let (code, _, _) = run(&[
        "run",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        c.to_str().unwrap(),
        "--jobs",
        "3",
        "--json-out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let body = std::fs::read_to_string(&out).unwrap();
    let tasks: Vec<String> = body
        .lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            v["task"].as_str().unwrap().to_string()
        })
        .collect();
    assert_eq!(tasks, vec!["witt", "metabolic", "cor-split"]);
}

#[test]
fn selftest_filter_runs_a_subset() {
    let (code, stdout, _) = run(&["selftest", "--filter", "remark"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("PASS criterion-1"));
    assert!(!stdout.contains("criterion-7"));
}
