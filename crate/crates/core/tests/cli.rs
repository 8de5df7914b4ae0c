use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_support-gaps"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn semigroup_json_schema() {
    let out = run(&["semigroup", "--gens", "4,9", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in [
        "span",
        "generators",
        "gaps",
        "gap_runs",
        "frobenius",
        "conductor",
        "gap_free",
        "support_prefix",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["frobenius"], 23);
    assert_eq!(v["conductor"], 24);
    assert_eq!(v["gap_runs"][0], serde_json::json!([1, 3]));
}

#[test]
fn table_csv() {
    let out = run(&["table", "--gens", "2,3", "--rows", "3", "--format", "csv"]);
    assert_eq!(stdout(&out), "n,value\n0,0\n1,2\n1,3\n2,4\n2,5\n2,6\n");
}

#[test]
fn pmf_header_and_zero_pattern() {
    let out = run(&["pmf", "--lambda", "2", "--gens", "3,7", "--K", "11", "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,p_n,member_of_semigroup"));
    let zeros: Vec<&str> = lines
        .filter(|l| l.split(',').nth(1) == Some("0"))
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(zeros, ["1", "2", "4", "5", "8", "11"]);
}

#[test]
fn did_shifted_geometric_is_refused() {
    let out = run(&["root", "--q", "1:1", "--lambda", "0", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["did", "--pmf", "0,0.5,0.25,0.125,0.0625,0.0625", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["is_did"], false);
    assert_eq!(v["violation_index"], 0);
}

#[test]
fn domain_errors_exit_2() {
    for args in [
        &["semigroup", "--gens", "0,3"][..],
        &["pmf", "--q", "1:0.3,2:0.3"],
        &["intervals", "--c", "-1", "--delta", "0.3"],
        &["extremity", "--lambda", "-1", "--q", "1:1"],
        &["simulate", "--gens", "3,7", "--samples", "0"],
    ] {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn extremity_csv_diagnostics() {
    let out = run(&[
        "extremity",
        "--ell",
        "1.5",
        "--lambda",
        "2",
        "--q",
        "0.5:1",
        "--format",
        "csv",
    ]);
    let text = stdout(&out);
    assert!(text.starts_with("theta,phi,g,estimate\n"));
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn simulate_is_reproducible_and_spills() {
    let dir = std::env::temp_dir().join(format!("support-gaps-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spill = dir.join("draws.csv");
    let args = [
        "simulate",
        "--lambda",
        "3",
        "--gens",
        "3,7",
        "--samples",
        "2000",
        "--seed",
        "5",
        "--format",
        "json",
        "--spill",
    ];
    let a = run(&[&args[..], &[spill.to_str().unwrap()]].concat());
    let first = std::fs::read_to_string(&spill).unwrap();
    let b = run(&[&args[..], &[spill.to_str().unwrap()]].concat());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(first, std::fs::read_to_string(&spill).unwrap());
    assert!(first.starts_with("t,value\n"));
    assert_eq!(first.lines().count(), 2001);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["containment"], true);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn batch_config() {
    let dir = std::env::temp_dir().join(format!("support-gaps-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("batch.json");
    std::fs::write(
        &path,
        r#"[{"subcommand": "semigroup", "gens": [2, 3], "format": "csv"},
            {"subcommand": "intervals", "c": "1", "delta": "3/10", "format": "csv"}]"#,
    )
    .unwrap();
    let out = run(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("value,member\n0,true\n1,false\n"));
    assert!(text.contains("k,lo,hi,length\n0,0,1,1\n1,1.3,2,0.7\n2,2.6,3,0.4\n3,3.9,4,0.1\n"));

    std::fs::write(&path, r#"[{"subcommand": "table", "gens": [2, 3], "colour": "red"}]"#).unwrap();
    assert_eq!(run(&["--config", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn self_check_json() {
    let out = run(&["paper-examples", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let cases = v.as_array().unwrap();
    assert!(cases.len() >= 15);
    assert!(cases.iter().all(|c| c["passed"] == true));
}
