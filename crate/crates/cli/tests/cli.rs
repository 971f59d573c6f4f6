//! End-to-end tests against the built binary: output shapes, exit codes,
//! and byte determinism.

use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn mdst() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mdst"))
}

fn run(args: &[&str]) -> Output {
    mdst().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn scratch_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("mdst-cli-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn triangle_stirling_row() {
    let output = run(&["triangle", "--n", "3", "--method", "stirling"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), "27,19,12,6\n");
}

#[test]
fn triangle_default_method_is_stirling() {
    let output = run(&["triangle", "--n", "0"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), "1\n");
}

#[test]
fn triangle_enumerate_small() {
    let output = run(&["triangle", "--n", "2", "--method", "enumerate"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), "4,3,2\n");
}

#[test]
fn triangle_all_methods_agree() {
    let output = run(&["triangle", "--n", "4", "--method", "all"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert_eq!(text.lines().count(), 5);
    for line in text.lines() {
        assert!(line.ends_with("256,175,110,60,24"), "line: {line}");
    }
}

#[test]
fn triangle_json_uses_decimal_strings() {
    let output = run(&["triangle", "--n", "2", "--format", "json"]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["method"], "stirling");
    assert_eq!(value["values"][0], "4");
}

#[test]
fn triangle_csv_format() {
    let output = run(&["triangle", "--n", "2", "--format", "csv"]);
    assert_eq!(
        stdout(&output),
        "n,k,value,method\n2,0,4,stirling\n2,1,3,stirling\n2,2,2,stirling\n"
    );
}

#[test]
fn exit_code_usage_is_2() {
    let output = run(&["triangle", "--n", "3", "--method", "fft"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["triangle"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn exit_code_limit_is_3() {
    let output = run(&["triangle", "--n", "9", "--method", "enumerate"]);
    assert_eq!(output.status.code(), Some(3));
    let output = run(&["export", "--n-max", "10", "--method", "enumerate"]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn exit_code_domain_is_4() {
    // image of (2,2) does not contain 1
    let path = scratch_path("notmember.json");
    std::fs::write(&path, r#"{"n":2,"values":[2,2]}"#).unwrap();
    let output = run(&["bijection", "--input", path.to_str().unwrap(), "--k", "1"]);
    assert_eq!(output.status.code(), Some(4));
    std::fs::remove_file(&path).ok();
}

#[test]
fn exit_code_io_is_5() {
    let output = run(&["bijection", "--input", "/no/such/file.json", "--k", "0"]);
    assert_eq!(output.status.code(), Some(5));
}

#[test]
fn env_var_lowers_enumeration_cap() {
    let output = mdst()
        .args(["triangle", "--n", "5", "--method", "enumerate"])
        .env("MDST_ENUMERATION_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn env_var_cannot_exceed_hard_limit() {
    let output = mdst()
        .args(["triangle", "--n", "1"])
        .env("MDST_ENUMERATION_CAP", "12")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn config_file_sets_defaults_and_flags_win() {
    let path = scratch_path("config.json");
    std::fs::write(&path, r#"{"output_format":"csv","n_max":3}"#).unwrap();
    // config format applies
    let output = run(&["triangle", "--n", "1", "--config", path.to_str().unwrap()]);
    assert_eq!(stdout(&output), "n,k,value,method\n1,0,1,stirling\n1,1,1,stirling\n");
    // flag wins over config
    let output = run(&[
        "triangle",
        "--n",
        "1",
        "--config",
        path.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(stdout(&output), "1,1\n");
    std::fs::remove_file(&path).ok();
}

#[test]
fn config_file_rejects_unknown_keys() {
    let path = scratch_path("badconfig.json");
    std::fs::write(&path, r#"{"n_mox":3}"#).unwrap();
    let output = run(&["triangle", "--n", "1", "--config", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_all_passes_quickly() {
    let output = run(&[
        "verify",
        "--suite",
        "all",
        "--n-max",
        "6",
        "--alpha-max",
        "2",
        "--order",
        "8",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.lines().all(|l| l.starts_with("ok  ")));
    assert!(text.contains("row_sum n=6"));
    assert!(text.contains("gen3 order=8"));
    assert!(text.contains("pascal_inverse n=6"));
    assert!(text.contains("bijection_round_trips n=4"));
}

#[test]
fn verify_bijections_includes_fixtures() {
    let output = run(&["verify", "--suite", "bijections", "--n-max", "2"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("ok   fixture_md_vertices"));
    assert!(text.contains("ok   fixture_bijection"));
}

#[test]
fn verify_json_report() {
    let output = run(&[
        "verify",
        "--suite",
        "matrix",
        "--n-max",
        "4",
        "--format",
        "json",
    ]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert!(value.as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn bijection_reproduces_worked_example() {
    let path = scratch_path("f.json");
    std::fs::write(&path, r#"{"n":5,"values":[5,2,1,3,2]}"#).unwrap();
    let output = run(&[
        "bijection",
        "--input",
        path.to_str().unwrap(),
        "--k",
        "2",
        "--alpha",
        "3",
        "--missing=-2,-1,1",
    ]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["g"], serde_json::json!([5, 1, 0, 3, 1]));
    assert_eq!(value["h"], serde_json::json!([5, 0, -3, 3, 0]));
    assert_eq!(value["recovered"]["k"], 2);
    assert_eq!(value["round_trip"], true);
    std::fs::remove_file(&path).ok();
}

#[test]
fn bijection_alpha_zero_h_equals_g() {
    let output = mdst()
        .args(["bijection", "--input", "-", "--k", "1"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child
                .stdin
                .take()
                .unwrap()
                .write_all(br#"{"n":2,"values":[1,2]}"#)?;
            child.wait_with_output()
        })
        .unwrap();
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["g"], value["h"]);
}

#[test]
fn bijection_rejects_wrong_missing_size() {
    let path = scratch_path("f2.json");
    std::fs::write(&path, r#"{"n":5,"values":[5,2,1,3,2]}"#).unwrap();
    let output = run(&[
        "bijection",
        "--input",
        path.to_str().unwrap(),
        "--k",
        "2",
        "--alpha",
        "3",
        "--missing=-2,-1",
    ]);
    assert_eq!(output.status.code(), Some(4));
    std::fs::remove_file(&path).ok();
}

#[test]
fn export_row_count_and_determinism() {
    let first = run(&["export", "--n-max", "3", "--format", "csv"]);
    assert!(first.status.success());
    let text = stdout(&first);
    // header + 1 + 2 + 3 + 4 data rows
    assert_eq!(text.lines().count(), 11);
    assert_eq!(text.lines().next().unwrap(), "n,k,value,method");
    let second = run(&["export", "--n-max", "3", "--format", "csv"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn export_n_max_zero() {
    let output = run(&["export", "--n-max", "0"]);
    assert_eq!(stdout(&output), "n,k,value,method\n0,0,1,stirling\n");
}

#[test]
fn export_json_to_file() {
    let path = scratch_path("export.json");
    let output = run(&[
        "export",
        "--n-max",
        "2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).is_empty());
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(value.as_array().unwrap().len(), 3);
    assert_eq!(value[2]["values"], serde_json::json!(["4", "3", "2"]));
    std::fs::remove_file(&path).ok();
}

#[test]
fn export_large_row_sums_match_power() {
    // row 25 of the stirling export sums to 26^25
    let output = run(&["export", "--n-max", "25", "--format", "json"]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let row = value[25]["values"].as_array().unwrap();
    let sum = row
        .iter()
        .map(|v| v.as_str().unwrap().parse::<num_bigint::BigInt>().unwrap())
        .sum::<num_bigint::BigInt>();
    let expected = num_bigint::BigInt::from(26u32).pow(25);
    assert_eq!(sum, expected);
}
