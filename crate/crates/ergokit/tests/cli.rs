//! End-to-end tests of the `ergokit` binary: spec'd command lines, exit
//! codes, JSON schema stability, and report determinism.

use std::process::{Command, Output};

fn ergokit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergokit"))
        .args(args)
        .env_remove("ERGOKIT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn capacity_of_reference_qubit() {
    let out = ergokit(&[
        "capacity",
        "--state",
        r#"{"name":"qubit","q":0.3,"c":0.2}"#,
        "--ham",
        "equispaced:d=2,E=1",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("capacity        0.565685425"), "got: {text}");
    assert!(text.contains("units           absolute"));
}

#[test]
fn capacity_json_schema_is_stable() {
    let out = ergokit(&[
        "capacity",
        "--state",
        r#"{"name":"qubit","q":0.3,"c":0.2}"#,
        "--ham",
        "equispaced:d=2,E=1",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["command"], "capacity");
    assert_eq!(value["units"], "absolute");
    let cap = value["capacity"].as_f64().unwrap();
    assert!((cap - 0.565685424949238).abs() < 1e-12);
    // Field order is declaration order; the serialized text therefore
    // starts with the command tag.
    let first_key = text.lines().nth(1).unwrap();
    assert!(first_key.contains("\"command\""), "unexpected leading key: {first_key}");
}

#[test]
fn gap_command_on_werner_pair() {
    let out = ergokit(&[
        "gap",
        "--state",
        r#"{"name":"werner2","v":1.0}"#,
        "--ham",
        "composite:equispaced:d=2,E=1xequispaced:d=2,E=1",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("delta_out            1.00000000"), "got: {text}");
    assert!(text.contains("delta_in             1.00000000"));
}

#[test]
fn multipartite_ghz_defaults() {
    let out = ergokit(&[
        "multipartite",
        "--state",
        r#"{"name":"ghz"}"#,
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["units"], "E");
    let measures = &value["measures"];
    assert!((measures["mbwcg"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((measures["wcv"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((measures["wcf"].as_f64().unwrap() - 128f64.sqrt()).abs() < 1e-8);
}

#[test]
fn total_command_on_qubit() {
    let out = ergokit(&[
        "total",
        "--state",
        r#"{"dims":[2],"matrix":[[[0.7,0],[0,0]],[[0,0],[0.3,0]]]}"#,
        "--ham",
        "equispaced:d=2,E=1",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let total = value["total_capacity"].as_f64().unwrap();
    let single = value["capacity"].as_f64().unwrap();
    assert!((total - 0.4).abs() < 1e-9);
    assert!((total - single).abs() < 1e-9);
}

#[test]
fn montecarlo_emits_csv_batches() {
    let out = ergokit(&[
        "montecarlo",
        "--model",
        "pure",
        "--dim",
        "2",
        "--ham",
        "equispaced:d=2,E=1",
        "--samples",
        "2000",
        "--seed",
        "7",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("batch,n,mean,variance"), "missing CSV header: {text}");
    assert!(text.lines().filter(|l| l.starts_with(char::is_numeric)).count() >= 10);

    // Same seed, same numbers.
    let again = ergokit(&[
        "montecarlo",
        "--model",
        "pure",
        "--dim",
        "2",
        "--ham",
        "equispaced:d=2,E=1",
        "--samples",
        "2000",
        "--seed",
        "7",
    ]);
    assert_eq!(text, stdout(&again));
}

#[test]
fn paper_report_is_byte_identical_across_runs() {
    let a = ergokit(&["paper-report", "--seed", "5"]);
    let b = ergokit(&["paper-report", "--seed", "5"]);
    assert!(a.status.success(), "stderr: {}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.contains("# Battery capacity reproduction report"));
    assert!(text.contains("## Errata ledger"));
    for id in [
        "equispaced-variance-closed-form",
        "capacity-bound-coefficient",
        "popoviciu-orientation",
        "pure-schmidt-gap-sqrt",
        "ghz-gap-theta-range",
        "qubit-antiergotropy-sign",
    ] {
        assert!(text.contains(id), "report lacks errata entry {id}");
    }
}

#[test]
fn seed_env_fallback() {
    let with_flag = ergokit(&["paper-report", "--seed", "9"]);
    let with_env = Command::new(env!("CARGO_BIN_EXE_ergokit"))
        .args(["paper-report"])
        .env("ERGOKIT_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(stdout(&with_flag), String::from_utf8_lossy(&with_env.stdout));
}

#[test]
fn validate_accepts_and_rejects() {
    let good = ergokit(&[
        "validate",
        "--state",
        r#"{"dims":[2],"matrix":[[[0.5,0],[0.1,0.2]],[[0.1,-0.2],[0.5,0]]]}"#,
    ]);
    assert!(good.status.success(), "stderr: {}", stderr(&good));
    assert!(stdout(&good).contains("valid           true"));

    // Trace below one: input error, exit 1, coded message.
    let bad = ergokit(&[
        "validate",
        "--state",
        r#"{"dims":[2],"matrix":[[[0.4,0],[0,0]],[[0,0],[0.5,0]]]}"#,
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let err = stderr(&bad);
    assert!(err.starts_with("E_TRACE_NOT_ONE:"), "got: {err}");
    assert_eq!(err.trim_end().lines().count(), 1, "error must be a single line");

    // Non-positive state.
    let negative = ergokit(&[
        "validate",
        "--state",
        r#"{"dims":[2],"matrix":[[[1.2,0],[0,0]],[[0,0],[-0.2,0]]]}"#,
    ]);
    assert_eq!(negative.status.code(), Some(1));
    assert!(stderr(&negative).starts_with("E_NOT_POSITIVE:"));
}

#[test]
fn parse_errors_carry_codes_and_exit_one() {
    let out = ergokit(&[
        "capacity",
        "--state",
        r#"{"name":"qubit","q":0.3,"c":0.2}"#,
        "--ham",
        "equispaced:d=2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("E_PARSE:"), "got: {}", stderr(&out));

    let out = ergokit(&[
        "capacity",
        "--state",
        r#"{"name":"martian"}"#,
        "--ham",
        "equispaced:d=2,E=1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("E_PARSE:"));
}

#[test]
fn degenerate_gibbs_exits_two() {
    // A flat ladder cannot match a non-maximal entropy: numerical failure
    // class, exit 2.
    let out = ergokit(&[
        "total",
        "--state",
        r#"{"dims":[2],"matrix":[[[0.7,0],[0,0]],[[0,0],[0.3,0]]]}"#,
        "--ham",
        "equispaced:d=2,E=0",
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
    assert!(stderr(&out).starts_with("E_DEGENERATE_SPECTRUM:"));
}

#[test]
fn matrix_hamiltonian_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    std::fs::write(
        &path,
        r#"{"matrix":[[[0,0],[0,0],[0,0]],[[0,0],[2,0],[0,0]],[[0,0],[0,0],[5,0]]]}"#,
    )
    .unwrap();
    let ham = format!("matrix:{}", path.display());
    let out = ergokit(&[
        "capacity",
        "--state",
        r#"{"dims":[3],"matrix":[[[0.5,0],[0,0],[0,0]],[[0,0],[0.3,0],[0,0]],[[0,0],[0,0],[0.2,0]]]}"#,
        "--ham",
        &ham,
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // Spectrum (0.2, 0.3, 0.5) against energies (0, 2, 5):
    // active = 0.2·0 + 0.3·2 + 0.5·5 = 3.1, passive = 0.5·0+0.3·2+0.2·5 = 1.6.
    assert!((value["capacity"].as_f64().unwrap() - 1.5).abs() < 1e-9);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.md");
    let out = ergokit(&[
        "paper-report",
        "--seed",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("## Errata ledger"));
}
