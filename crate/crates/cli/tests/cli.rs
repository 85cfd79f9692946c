//! End-to-end checks of the command-line surface: flag validation and exit
//! codes, the documented output lines, file output, and the catalog
//! override.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistats"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("twistats-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn tables_prints_the_trivial_class_trace_moments() {
    let output = run(&["tables"]);
    assert!(output.status.success());
    assert!(
        stdout(&output).contains("1,1,C1,9,162,3645,91854,2480058"),
        "missing the trivial-class line"
    );
    // The report flags entries for which variant figures circulate.
    assert!(stdout(&output).contains("# flagged: row 9 coefficient 1 M8 = 15316"));
}

#[test]
fn verify_group_prints_the_summary_sentence() {
    let output = run(&["verify-group"]);
    assert!(output.status.success());
    assert!(stdout(&output)
        .contains("11 subgroup classes; 9 distinct signatures; USp lemmas pass"));
}

#[test]
fn out_of_range_flags_exit_with_usage_errors() {
    assert_eq!(run(&["sweep", "--row", "12", "--xmax", "1000"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--row", "1", "--xmax", "7"]).status.code(), Some(2));
    assert_eq!(run(&["mc", "--row", "1", "--i", "9", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["oracle", "--row", "3", "--depth", "4"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn oracle_reports_a_clean_pass() {
    let output = run(&["oracle", "--row", "2", "--pmax", "100"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.starts_with("row,pmax,depth,primes_checked"));
    assert!(text.contains(",true"));
}

#[test]
fn mc_emits_one_estimate_record() {
    let output = run(&[
        "mc", "--row", "1", "--i", "1", "--n", "2", "--samples", "5000", "--seed", "1",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.starts_with("row,group,i,n,samples,seed,mean,stderr,exact,z_score"));
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("1,C1,1,2,5000,1,"));
}

#[test]
fn sweep_writes_csv_to_a_file_and_json_to_stdout() {
    let path = temp_path("sweep.csv");
    let output = run(&[
        "sweep", "--row", "2", "--xmax", "2000",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("row,i,k,theoretical_num,theoretical_den,empirical,rel_dev"));
    assert!(written.contains("bin_low,bin_high"));
    std::fs::remove_file(&path).ok();

    let output = run(&["sweep", "--row", "2", "--xmax", "2000", "--format", "json"]);
    assert!(output.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(parsed["kind"], "sweep_report");
    assert_eq!(parsed["config"]["row"], 2);
}

#[test]
fn catalog_override_is_accepted_and_bad_files_fail() {
    let path = temp_path("catalog.json");
    std::fs::write(&path, twistats_core::sweep::catalog_to_json()).unwrap();
    let output = run(&[
        "oracle", "--row", "4", "--pmax", "60",
        "--catalog", path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    std::fs::remove_file(&path).ok();

    let bad = temp_path("bad-catalog.json");
    std::fs::write(&bad, "not a catalog").unwrap();
    let output = run(&[
        "oracle", "--row", "4", "--pmax", "60",
        "--catalog", bad.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("\"kind\":\"failure\""), "stderr: {err}");
    std::fs::remove_file(&bad).ok();
}

#[test]
fn tables_json_carries_schema_and_config() {
    let output = run(&["tables", "--max-k", "4", "--format", "json"]);
    assert!(output.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(parsed["schema_version"], 1);
    assert_eq!(parsed["kind"], "moment_tables");
    assert_eq!(parsed["max_k"], 4);
    assert!(parsed["entries"].as_array().unwrap().len() >= 11 * 3 * 5);
    // Flags apply only to moments within max_k; none reach k = 4.
    assert_eq!(parsed["flagged_entries"].as_array().unwrap().len(), 0);

    let full = run(&["tables", "--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&full)).unwrap();
    let flags = parsed["flagged_entries"].as_array().unwrap();
    assert_eq!(flags.len(), 4);
    assert!(flags.iter().any(|f| f["computed"] == 15316 && f["variant"] == 153316));
}
