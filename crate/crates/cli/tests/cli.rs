//! End-to-end tests against the built binary: output shapes, exit codes,
//! and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let path: PathBuf =
        [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    path.display().to_string()
}

fn cpkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn solve_reports_answer_sets_as_json() {
    let out = cpkit(&["solve", &fixture("parity3.lp")]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["count"], 4);
    assert_eq!(
        v["answer_sets"],
        serde_json::json!(["001", "010", "100", "111"])
    );
}

#[test]
fn solve_covers_every_formalism() {
    for (file, flag, expected) in [
        ("parity3.cc", "cc", serde_json::json!(["001", "010", "100", "111"])),
        ("parity2.dt", "dt", serde_json::json!(["01", "10"])),
        ("parity2.pf", "pf", serde_json::json!(["01", "10"])),
    ] {
        let out = cpkit(&["solve", &fixture(file), "--formalism", flag]);
        assert!(out.status.success(), "{file}: {}", stderr_of(&out));
        let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
        assert_eq!(v["answer_sets"], expected, "{file}");
    }
}

#[test]
fn check_parity_passes_on_the_encoder() {
    let out = cpkit(&["check", "--property", "parity", "--n", "3", &fixture("parity3.lp")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["holds"], true);
}

#[test]
fn check_failure_exits_one_with_counterexample() {
    let out = cpkit(&["check", "--property", "parity", &fixture("choice.lp")]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["holds"], false);
    assert!(v["counterexample"]["interpretation"].is_string());
}

#[test]
fn check_antichain_spots_inclusions() {
    let out = cpkit(&["check", "--property", "antichain", &fixture("parity3.lp")]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["counterexample"]["superset"], "111");
}

#[test]
fn check_lin_zhao_and_fages_on_files() {
    let lz = cpkit(&["check", "--property", "lin-zhao", &fixture("singleton_pair.lp")]);
    assert_eq!(lz.status.code(), Some(0), "{}", stderr_of(&lz));
    // The singleton-loop pair is not completion-equivalent.
    let fages = cpkit(&["check", "--property", "fages", &fixture("singleton_pair.lp")]);
    assert_eq!(fages.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&fages)).unwrap();
    assert_eq!(v["counterexample"]["loop"], "{x1}");
}

#[test]
fn random_checks_are_deterministic() {
    let args = [
        "check",
        "--property",
        "lin-zhao",
        "--random",
        "--seed",
        "7",
        "--count",
        "50",
    ];
    let first = cpkit(&args);
    let second = cpkit(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr_of(&first));
    assert_eq!(stdout_of(&first), stdout_of(&second));
}

#[test]
fn simplify_emits_program_and_trace() {
    let out = cpkit(&["simplify", &fixture("mutual_pair.lp")]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "#vars 2.\nx1 :- not x2.\nx2 :- not x1.\n");
    let trace: serde_json::Value = serde_json::from_str(stderr_of(&out).trim()).unwrap();
    assert_eq!(trace["verified"], true);
    assert_eq!(trace["passes"].as_array().unwrap().len(), 5);
}

#[test]
fn simplify_rejects_non_parity_inputs() {
    let out = cpkit(&["simplify", &fixture("choice.lp")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("odd strings"));
}

#[test]
fn generate_round_trips_through_solve() {
    let dir = std::env::temp_dir().join("cpkit-cli-test-gen");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("parity4.lp");
    let out = cpkit(&["generate", "--formalism", "cp", "--n", "4", "--out", &path.display().to_string()]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let solved = cpkit(&["solve", &path.display().to_string()]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&solved)).unwrap();
    assert_eq!(v["count"], 8);
    let checked = cpkit(&["check", "--property", "parity", &path.display().to_string()]);
    assert_eq!(checked.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn generate_refuses_normal_programs_beyond_two() {
    let out = cpkit(&["generate", "--formalism", "lp", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("anti-chain"));
}

#[test]
fn complete_prints_equivalences() {
    let out = cpkit(&["complete", &fixture("singleton_pair.lp")]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "x1 <-> x1 | !x2\nx2 <-> x2 | !x1\n");
}

#[test]
fn complete_dimacs_exports_or_refuses() {
    let ok = cpkit(&["complete", "--dimacs", &fixture("constraints_only.lp")]);
    assert!(ok.status.success(), "{}", stderr_of(&ok));
    assert_eq!(stdout_of(&ok), "p cnf 2 4\n-1 0\n-2 0\n-1 2 0\n1 0\n");

    let refused = cpkit(&["complete", "--dimacs", &fixture("singleton_pair.lp")]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(stderr_of(&refused).contains("not CNF-shaped"));
}

#[test]
fn loops_and_loop_formulas() {
    let loops = cpkit(&["loops", &fixture("mutual_pair.lp")]);
    assert_eq!(stdout_of(&loops), "{x1, x2}\n");
    let json = cpkit(&["loops", "--json", &fixture("mutual_pair.lp")]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&json)).unwrap();
    assert_eq!(v["count"], 1);
    let lf = cpkit(&["loop-formulas", &fixture("mutual_pair.lp")]);
    assert!(stdout_of(&lf).contains("->"));
}

#[test]
fn translate_preserves_models() {
    let out = cpkit(&["translate", "--to", "tv", &fixture("parity3.lp")]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let dir = std::env::temp_dir().join("cpkit-cli-test-tv");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("translated.tv");
    std::fs::write(&path, stdout_of(&out)).unwrap();
    let solved = cpkit(&["solve", "--formalism", "tv", &path.display().to_string()]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&solved)).unwrap();
    assert_eq!(
        v["answer_sets"],
        serde_json::json!(["001", "010", "100", "111"])
    );
    std::fs::remove_dir_all(&dir).ok();

    let from_pf = cpkit(&["translate", "--to", "tv", "--from", "pf", &fixture("parity2.pf")]);
    assert!(from_pf.status.success(), "{}", stderr_of(&from_pf));
    assert!(stdout_of(&from_pf).starts_with("#vars 2.\n"));
}

#[test]
fn bench_sizes_tabulates() {
    let out = cpkit(&["bench-sizes", "--n-max", "6", "--json"]);
    let rows: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 6);
    assert_eq!(rows[3]["cp_rules"], 7);
    assert_eq!(rows[3]["cc_constraints"], 3);

    let text = cpkit(&["bench-sizes", "--n-max", "4"]);
    assert!(stdout_of(&text).lines().count() == 5);
}

#[test]
fn parse_errors_exit_two_with_position() {
    let out = cpkit(&["solve", &fixture("broken.lp")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("line 1"));
}

#[test]
fn cap_exceeded_exits_three() {
    let out = cpkit(&["solve", &fixture("parity3.lp"), "--max-n", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("cap"));
}

#[test]
fn loop_cap_exceeded_exits_three() {
    let out = cpkit(&["loops", &fixture("singleton_pair.lp"), "--max-loops", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn env_var_sets_default_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_cpkit"))
        .args(["solve", &fixture("parity3.lp")])
        .env("CPKIT_MAX_N", "2")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
}
