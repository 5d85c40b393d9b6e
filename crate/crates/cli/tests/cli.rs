//! End-to-end tests for the `mzv` binary: output formats, exit codes,
//! and report determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn mzv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("mzv-cli-test-{}-{name}", std::process::id()))
}

/// Extracts the number following `value: ` from an estimate printout.
fn parse_value(text: &str) -> f64 {
    let line = text
        .lines()
        .find(|l| l.starts_with("value:"))
        .expect("value line");
    line.trim_start_matches("value:").trim().parse().unwrap()
}

#[test]
fn exact_algebra_commands_print_expected_text() {
    for (args, expected) in [
        (vec!["dual", "(2,2)"], "(1,2,1)\n"),
        (vec!["reverse", "(1,2,3)"], "(3,2,1)\n"),
        (vec!["backprime", "(2)"], "(1,1)\n"),
        (vec!["harmonic", "(1)", "3"], "11/6\n"),
        (vec!["harmonic", "(2,1)", "2"], "11/8\n"),
        (vec!["u", "(2)"], "1*(1,1) + 1*(2)\n"),
        (vec!["d", "(1,1)"], "1*(1,1) + 1*(2)\n"),
        (vec!["dinv", "(1,2)"], "1*(1,2) + -1*(3)\n"),
        (vec!["stuffle", "(2)", "(3)"], "1*(2,3) + 1*(3,2) + 1*(5)\n"),
        (vec!["circledast", "(2)", "(1)"], "1*(3)\n"),
        (vec!["circledast", "(1,1)", "(1)"], "1*(2,1)\n"),
    ] {
        let out = mzv(&args);
        assert!(out.status.success(), "{args:?} failed: {out:?}");
        assert_eq!(stdout(&out), expected, "unexpected output for {args:?}");
    }
}

#[test]
fn malformed_arguments_exit_2() {
    for args in [
        vec!["harmonic", "(2,", "3"],
        vec!["dual", "(0)"],
        vec!["gseries", "(2)", "1.5+2j"],
        vec!["newton", "(2)", "abc"],
        vec!["not-a-command"],
    ] {
        let out = mzv(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {out:?}");
    }
}

#[test]
fn domain_violations_exit_1() {
    // Non-admissible zeta argument; G-series at a pole; empty-index dual.
    for args in [
        vec!["zeta", "(1,2)"],
        vec!["gseries", "(2)", "-1", "--trunc", "50000"],
        vec!["dual", "()"],
    ] {
        let out = mzv(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {out:?}");
    }
}

#[test]
fn newton_and_gseries_agree_through_backprime() {
    // F_(2)(1.5) = G_(1,1)(1.5): run both evaluators through the CLI.
    let f = mzv(&["newton", "(2)", "1.5", "--terms", "20000"]);
    let g = mzv(&["gseries", "(1,1)", "1.5", "--trunc", "200000"]);
    assert!(f.status.success() && g.status.success());
    let (fv, gv) = (parse_value(&stdout(&f)), parse_value(&stdout(&g)));
    assert!((fv - gv).abs() < 1e-6, "F = {fv}, G = {gv}");
}

#[test]
fn zeta_matches_classical_value() {
    let out = mzv(&["zeta", "(2)", "--trunc", "200000"]);
    assert!(out.status.success());
    let value = parse_value(&stdout(&out));
    assert!((value - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-6);
}

#[test]
fn phi_evaluates_matrix_files() {
    let path = temp_path("matrix.json");
    std::fs::write(&path, r#"[[null,2,">",1]]"#).unwrap();
    let out = mzv(&["phi", path.to_str().unwrap(), "2", "--trunc", "100000"]);
    std::fs::remove_file(&path).ok();
    assert!(out.status.success(), "{out:?}");
    // Phi_2 of that matrix interpolates S_(1,2)(2) = 13/8.
    assert!((parse_value(&stdout(&out)) - 1.625).abs() < 1e-6);

    let bad = temp_path("bad-matrix.json");
    std::fs::write(&bad, "not json").unwrap();
    let out = mzv(&["phi", bad.to_str().unwrap(), "2"]);
    std::fs::remove_file(&bad).ok();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_duality_report_is_deterministic_and_well_formed() {
    let (p1, p2) = (temp_path("report1.json"), temp_path("report2.json"));
    let args = |p: &PathBuf| {
        vec![
            "verify".to_string(),
            "duality".to_string(),
            "--max-weight".to_string(),
            "2".to_string(),
            "--trunc".to_string(),
            "50000".to_string(),
            "--json".to_string(),
            p.to_str().unwrap().to_string(),
        ]
    };
    let run1 = mzv(&args(&p1).iter().map(String::as_str).collect::<Vec<_>>());
    let run2 = mzv(&args(&p2).iter().map(String::as_str).collect::<Vec<_>>());
    assert!(run1.status.success() && run2.status.success());

    let (b1, b2) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    std::fs::remove_file(&p1).ok();
    std::fs::remove_file(&p2).ok();
    assert_eq!(b1, b2, "identical invocations must produce identical JSON");

    let doc: serde_json::Value = serde_json::from_slice(&b1).unwrap();
    assert_eq!(doc["command"], "verify duality");
    assert_eq!(doc["params"]["max_weight"], 2);
    assert_eq!(doc["all_pass"], true);
    let cases = doc["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 6);
    for case in cases {
        for key in ["alpha", "aux", "lhs", "rhs", "abs_diff", "pass", "ms"] {
            assert!(case.get(key).is_some(), "case missing {key}: {case}");
        }
        assert_eq!(case["ms"], 0.0, "timing must be off by default");
        assert!(case["lhs"].get("re").is_some());
        assert!(case["lhs"].get("err").is_some());
    }
}

#[test]
fn verify_exit_code_reflects_failures() {
    // An impossibly tight tolerance forces a nonzero |diff| case to fail.
    let out = mzv(&[
        "verify",
        "duality",
        "--max-weight",
        "2",
        "--trunc",
        "50000",
        "--tol",
        "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn verify_formula_small_campaign_passes() {
    let out = mzv(&["verify", "formula", "--max-weight", "2", "--trunc", "50000"]);
    assert!(out.status.success(), "{out:?}");
    assert!(stdout(&out).contains("ALL PASS"));
}
