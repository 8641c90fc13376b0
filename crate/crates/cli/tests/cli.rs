use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn sieveforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sieveforge"))
        .args(args)
        .env_remove("SIEVEFORGE_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn iso_example_pair() {
    let out = sieveforge(&[
        "iso",
        "--a",
        "example6_G",
        "--b",
        "example6_H",
        "--levels",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "WL: indistinguishable; SNN(var): DISTINGUISHED\n"
    );

    let out = sieveforge(&[
        "iso",
        "--a",
        "builtin:k3",
        "--b",
        "builtin:p3",
        "--stats",
        "sum",
    ]);
    assert_eq!(stdout(&out), "WL: DISTINGUISHED; SNN(sum): DISTINGUISHED\n");
}

#[test]
fn usage_errors_exit_two() {
    let out = sieveforge(&[
        "transform",
        "--in",
        "k3",
        "--normalize",
        "--scalar",
        "bigint",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalization"));
    assert_eq!(
        sieveforge(&["transform", "--in", "k3", "--levels", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sieveforge(&["iso", "--a", "k3", "--b", "not-a-graph"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(sieveforge(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        sieveforge(&["transform", "--in", "k3", "--gamma", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn validate_passes() {
    let out = sieveforge(&["validate"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn csl_report_is_thread_independent() {
    let one = sieveforge(&["csl", "--seed", "0", "--threads", "1"]);
    let eight = sieveforge(&["csl", "--seed", "0", "--threads", "8"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, eight.stdout);
    let report: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(report["seed"], 0);
    assert_eq!(report["elapsed_ms"], 0);
    assert_eq!(report["classes"].as_array().unwrap().len(), 10);
    assert_eq!(report["pairs"]["total"], 11175);
}

#[test]
fn transform_jsonl_with_features() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("graphs.jsonl");
    fs::write(
        &input,
        "{\"id\":\"a\",\"n\":3,\"edges\":[[0,1],[1,2]],\"features\":[[1.0,0.5],[2.0,1.0]]}\n\
         {\"n\":2,\"edges\":[[0,1]],\"features\":[[1.0,1.0]]}\n",
    )
    .unwrap();
    let out_path = dir.path().join("out.jsonl");
    let out = sieveforge(&[
        "transform",
        "--in",
        input.to_str().unwrap(),
        "--featured",
        "--levels",
        "0,1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&out_path).unwrap();
    let records: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["id"], "a");
    assert_eq!(records[1]["id"], "graphs-1");
    assert_eq!(records[0]["kind"], "featurevec");
    assert_eq!(records[0]["entries"][1], serde_json::json!([1.0, 0.5]));

    let csv = sieveforge(&[
        "transform",
        "--in",
        input.to_str().unwrap(),
        "--featured",
        "--format",
        "csv",
    ]);
    assert_eq!(csv.status.code(), Some(2));
}

#[test]
fn srg_report_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("family.g6");
    // Two copies of one graph: a duplicate pair, so nothing counts as a failure.
    fs::write(&path, ">>graph6<<Bw\nBw\n").unwrap();
    let csv = dir.path().join("emb.csv");
    let out = sieveforge(&[
        "srg",
        "--in",
        path.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pairs"]["total"], 1);
    assert_eq!(report["pairs"]["duplicates"], 1);
    assert_eq!(report["failure_rate"], "0");
    let table = fs::read_to_string(csv).unwrap();
    assert_eq!(table.lines().next(), Some("id,mean,var,diag_mean,diag_var"));
    assert_eq!(table.lines().count(), 3);
}

#[test]
fn graph6_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.g6");
    fs::write(&good, ">>graph6<<Bw\r\nDQc\n\nE?Bw\n").unwrap();
    let out = sieveforge(&["g6", "--roundtrip", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "roundtrip ok: 3 graph(s)\n");

    let bad = dir.path().join("bad.g6");
    fs::write(&bad, "Bw\nB\n").unwrap();
    let out = sieveforge(&["g6", "--roundtrip", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
