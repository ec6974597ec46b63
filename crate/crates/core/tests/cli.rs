use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nodal-mirror")).args(args).output().unwrap()
}

#[test]
fn closed_verify_passes_with_json_report() {
    let out = run(&["verify", "--scenario", "closed", "--genus", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "pass");
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["even ring", "fiber product oracle", "odd module"]);
    for key in ["cutoffs", "dictionary", "presentation", "builder"] {
        assert!(v["provenance"].get(key).is_some(), "provenance lacks {key}");
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["verify", "--scenario", "punctured", "--genus", "2", "-k", "1", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn missing_genus_is_a_usage_error() {
    let out = run(&["verify", "--scenario", "closed"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("genus"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(run(&["verify", "--bogus"]).status.code(), Some(2));
}

#[test]
fn zero_slack_is_a_cutoff_error() {
    let out = run(&["limit", "--scenario", "punctured", "--genus", "2", "-k", "1", "--slack", "0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn hf_table_lists_products() {
    let out = run(&["hf", "--genus", "2", "--degree", "3", "--table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("HF^even(phi^3): f^3, e_1^3, e_2^3"), "{text}");
    assert!(text.contains("f^1 * f^1 = 2*e_1^2 + f^2"), "{text}");
}

#[test]
fn cech_reports_and_writes_output_file() {
    let dir = std::env::temp_dir().join(format!("nodal-mirror-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&[
        "cech",
        "--builder",
        "nodal:g=3,l=1",
        "--sheaf",
        "Tbal",
        "--truncation",
        "10",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["checks"][0]["dims_b"][1], 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_file_drives_a_run() {
    let dir = std::env::temp_dir().join(format!("nodal-mirror-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.json");
    std::fs::write(&path, r#"{"command": "homog", "scenario": {"genus": 2}, "power": 2, "format": "json"}"#).unwrap();
    let out = run(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"][0]["name"], "graded ring XYZ - Y^4 - Z^2");
    std::fs::write(&path, "{\"command\": \"homog\",\n \"power\": \"two\"}").unwrap();
    let out = run(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    std::fs::remove_dir_all(&dir).unwrap();
}
