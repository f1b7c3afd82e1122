//! End-to-end CLI contract: exit codes, output determinism, fixture
//! subcommands, and the color switch.

use std::process::{Command, Output};

fn geoverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geoverify"))
        .args(args)
        .env_remove("GEOVERIFY_COLOR")
        .output()
        .expect("binary runs")
}

#[test]
fn exit_zero_when_all_checks_pass() {
    let out = geoverify(&["verify", "trivial-ps-r1", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("overall: PASS"));
}

#[test]
fn exit_one_when_a_check_fails() {
    let out = geoverify(&["verify", "example2-r3", "--suite", "sasakian"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("para-sasakian: nabla-xi-vs-eps-phi") && text.contains("FAIL"),
        "failing row must be visible:\n{text}"
    );
}

#[test]
fn exit_two_on_operational_errors() {
    // missing file
    let out = geoverify(&["verify", "/nonexistent/path.gvspec"]);
    assert_eq!(out.status.code(), Some(2));
    // missing block for the requested suite
    let out = geoverify(&["verify", "euclidean-r3", "--suite", "axioms"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("structure"));
    // unknown fixture name for dump
    let out = geoverify(&["fixtures", "dump", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let run = || {
        geoverify(&[
            "verify",
            "example2-r3",
            "--suite",
            "all",
            "--format",
            "json",
        ])
    };
    let a = run();
    let b = run();
    assert_eq!(a.stdout, b.stdout, "byte-identical JSON required");
    assert!(!a.stdout.is_empty());
}

#[test]
fn fixtures_list_and_dump() {
    let out = geoverify(&["fixtures", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "euclidean-r3",
        "example1-r5-g1",
        "example1-r5-g2",
        "example2-r3",
        "trivial-ps-r1",
    ] {
        assert!(text.contains(name));
    }

    let out = geoverify(&["fixtures", "dump", "example2-r3"]);
    assert_eq!(out.status.code(), Some(0));
    let dumped = String::from_utf8(out.stdout).unwrap();
    assert!(dumped.contains("lambda = exp(2*z) - 1"));

    // a dumped fixture is itself a loadable spec file
    let dir = std::env::temp_dir().join("geoverify-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dumped.gvspec");
    std::fs::write(&path, &dumped).unwrap();
    let out = geoverify(&["verify", path.to_str().unwrap(), "--suite", "soliton"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = std::env::temp_dir().join("geoverify-out-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = geoverify(&[
        "verify",
        "trivial-ps-r1",
        "--suite",
        "all",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty(), "report goes to the file, not stdout");
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.contains("\"overall\": true"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn theorems_subcommand_runs_standalone() {
    let out = geoverify(&["theorems", "--trials", "2000", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("alg-scal-formula-consistency"));
    assert!(text.contains("overall: PASS"));
}

#[test]
fn color_env_variable_is_honored() {
    let plain = geoverify(&["verify", "trivial-ps-r1", "--suite", "axioms"]);
    assert!(!String::from_utf8_lossy(&plain.stdout).contains('\u{1b}'));

    let colored = Command::new(env!("CARGO_BIN_EXE_geoverify"))
        .args(["verify", "trivial-ps-r1", "--suite", "axioms"])
        .env("GEOVERIFY_COLOR", "1")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&colored.stdout).contains('\u{1b}'));
}

#[test]
fn points_and_seed_flags_override_sampling()  {
    let out = geoverify(&[
        "verify",
        "example2-r3",
        "--suite",
        "soliton",
        "--points",
        "12",
        "--seed",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(json["points"], 12);
    assert_eq!(json["seed"], 3);
}
