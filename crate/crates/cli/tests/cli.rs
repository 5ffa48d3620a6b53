use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hochschild"))
        .args(args)
        .env_remove("HOCHSCHILD_SIZE_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn table_json_for_two_generators() {
    let out = run(&["table", "--n", "2", "--ring", "Z", "--max-degree", "3", "--format", "json"]);
    assert!(out.status.success());
    let rows = json_lines(&out);
    assert_eq!(rows.len(), 8);
    let row = rows.iter().find(|r| r["kind"] == "cohomology" && r["k"] == 1).unwrap();
    assert_eq!(row["free"], 4);
    assert_eq!(row["torsion"], serde_json::json!([2, 2]));
    assert_eq!(row["n"], 2);
    assert_eq!(row["ring"], "Z");
}

#[test]
fn methods_agree_through_the_cli() {
    let strip = |o: &Output| {
        json_lines(o)
            .into_iter()
            .map(|mut v| {
                v.as_object_mut().unwrap().remove("method");
                v.as_object_mut().unwrap().remove("flag");
                v
            })
            .collect::<Vec<_>>()
    };
    let base = ["table", "--n", "2", "--ring", "Z,F2", "--max-degree", "3", "--format", "json", "--method"];
    let closed = run(&[&base[..], &["closed"]].concat());
    let reduced = run(&[&base[..], &["reduced"]].concat());
    let oracle = run(&[&base[..], &["oracle"]].concat());
    assert_eq!(strip(&closed), strip(&reduced));
    assert_eq!(strip(&reduced), strip(&oracle));
}

#[test]
fn f2_degree_zero_for_one_generator() {
    let out = run(&["table", "--n", "1", "--ring", "F2", "--max-degree", "0", "--kind", "homology", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,k,ring,kind,free_rank,torsion_divisors,method,elapsed_ms");
    assert_eq!(lines.next().unwrap(), "1,0,F2,homology,2,[],closed,");
    assert!(lines.next().is_none());
}

#[test]
fn verify_one_generator_passes() {
    let out = run(&["verify", "--n", "1", "--max-degree", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("all suites passed"));
}

#[test]
fn output_is_deterministic() {
    for format in ["text", "json", "csv"] {
        let args = ["table", "--n", "3", "--ring", "Z,Q,F3", "--max-degree", "3", "--method", "reduced", "--format", format];
        assert_eq!(run(&args).stdout, run(&args).stdout, "format {format}");
    }
}

#[test]
fn resolution_is_minimal() {
    let out = run(&["resolution", "--n", "2", "--max-degree", "3", "--check", "--format", "json"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    let summary = lines.last().unwrap();
    assert_eq!(summary["minimal"], true);
    assert_eq!(summary["morse_reduction_matches"], true);
    let ranks: Vec<usize> =
        (0..=3).map(|k| lines.iter().filter(|l| l["record"] == "generator" && l["degree"] == k).count()).collect();
    assert_eq!(ranks, vec![1, 2, 3, 4]);
}

#[test]
fn cup_table_agrees() {
    let out = run(&["cup", "--n", "2", "--max-degree", "2", "--ring", "Q", "--format", "json"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert_eq!(lines.last().unwrap()["agrees"], true);
    let span = lines.iter().find(|l| l["record"] == "span").unwrap();
    assert_eq!(span["spans"], true);
}

#[test]
fn size_limit_exit_code() {
    let out = run(&["table", "--n", "4", "--max-degree", "6", "--method", "oracle", "--size-limit", "100"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("degree"), "{err}");

    let out = Command::new(env!("CARGO_BIN_EXE_hochschild"))
        .args(["table", "--n", "4", "--max-degree", "6", "--method", "oracle"])
        .env("HOCHSCHILD_SIZE_LIMIT", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_input_exit_code() {
    assert_eq!(run(&["table", "--n", "1", "--ring", "F4"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["cup", "--n", "1", "--ring", "Z"]).status.code(), Some(2));
}
