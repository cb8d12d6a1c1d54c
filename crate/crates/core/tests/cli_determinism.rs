//! End-to-end checks of the command-line binary: byte determinism across
//! thread counts, schemas, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nphoton"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nphoton-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn tables_deterministic_across_thread_counts() {
    let f1 = scratch("tables-t1.csv");
    let f8 = scratch("tables-t8.csv");
    run_ok(&["tables", "--k", "2", "--n", "3", "--threads", "1", "--output", f1.to_str().unwrap()]);
    run_ok(&["tables", "--k", "2", "--n", "3", "--threads", "8", "--output", f8.to_str().unwrap()]);
    let b1 = std::fs::read(&f1).unwrap();
    let b8 = std::fs::read(&f8).unwrap();
    assert_eq!(b1, b8);
    assert!(!b1.is_empty());
}

#[test]
fn noon_scan_240_points_deterministic_across_thread_counts() {
    let f1 = scratch("scan-t1.csv");
    let f8 = scratch("scan-t8.csv");
    let base = ["noon-scan", "--scenario", "2H1V+1V"];
    run_ok(&[&base[..], &["--threads", "1", "--output", f1.to_str().unwrap()]].concat());
    run_ok(&[&base[..], &["--threads", "8", "--output", f8.to_str().unwrap()]].concat());
    let b1 = std::fs::read(&f1).unwrap();
    assert_eq!(b1, std::fs::read(&f8).unwrap());
    let text = String::from_utf8(b1).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "delay,raw,normalized");
    assert!(lines.len() - 1 >= 240, "{} points", lines.len() - 1);
    assert!(!text.contains('\r'));
}

#[test]
fn threads_env_var_honored() {
    let direct = run_ok(&["tables", "--k", "2", "--n", "2"]);
    let out = bin()
        .args(["tables", "--k", "2", "--n", "2"])
        .env("NPHOTON_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(direct.stdout, out.stdout);
}

#[test]
fn tables_2_2_contains_golden_values() {
    let out = run_ok(&["tables", "--k", "2", "--n", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "scenario,formula_num,formula_den,formula_value,bruteforce_value,abs_diff"
    );
    for (scenario, num, den) in
        [("2H2V", "1", "1"), ("2H1V+1V", "2", "3"), ("1H1V+1H1V", "1", "3"), ("1H1V+1H+1V", "1", "3")]
    {
        assert!(
            lines.iter().any(|l| {
                let mut f = l.split(',');
                f.next() == Some(scenario) && f.next() == Some(num) && f.next() == Some(den)
            }),
            "missing {scenario} = {num}/{den} in:\n{text}"
        );
    }
}

#[test]
fn scenarios_subcommand_counts() {
    let out = run_ok(&["scenarios", "--k", "3", "--n", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 12); // header + 11 scenarios
}

#[test]
fn json_output_is_valid() {
    let out = run_ok(&["noon-scan", "--scenario", "1H1V", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(value["baseline"].as_f64().unwrap() > 0.0);
    assert_eq!(value["delays"].as_array().unwrap().len(), 241);
}

#[test]
fn hom_scan_schema() {
    let out = run_ok(&["hom-scan"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "delay,visibility");
    assert_eq!(lines.len(), 242); // header + 241 default grid points
}

#[test]
fn exit_code_validation_error() {
    let out = bin().args(["noon-scan", "--scenario", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["noon-scan"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1)); // neither --input nor --scenario
    let out = bin().args(["bogus-subcommand"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_code_io_error() {
    let out = bin()
        .args(["tables", "--k", "2", "--n", "2", "--output", "/nonexistent-dir/x.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn json_input_config_accepted() {
    let path = scratch("config.json");
    std::fs::write(
        &path,
        r#"{"sigma": 1.0, "photons": [
            {"delay": 0.0, "polarization": "H"},
            {"delay": 0.0, "polarization": "V"},
            {"delay": 0.0, "family": 1, "polarization": "V"}
        ]}"#,
    )
    .unwrap();
    let out = run_ok(&["noon-scan", "--input", path.to_str().unwrap(), "--format", "json"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // 1H over {1V aligned, 1V elsewhere}: one half-depth dip at zero offset
    let dips = value["visibilities"].as_array().unwrap();
    assert_eq!(dips.len(), 1);
    assert!((dips[0]["visibility"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}
