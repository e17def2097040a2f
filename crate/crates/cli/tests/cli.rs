mod common;

use std::collections::BTreeSet;

use common::{run, write};

fn stderr(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn calib_eval_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pairs.jsonl", &common::pairs_jsonl(12_000, 1));
    let out = run(
        dir.path(),
        &[
            "calib",
            "eval",
            "--input",
            "pairs.jsonl",
            "--bin-size",
            "5000",
            "--samples",
            "10000",
            "--seed",
            "42",
            "--out",
            "report.json",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["n"], 12_000);
    assert_eq!(report["bins"].as_array().unwrap().len(), 2);
    assert!(report["ci_lo"].as_f64().unwrap() <= report["ci_hi"].as_f64().unwrap());
}

#[test]
fn svg_has_one_marker_per_bin() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pairs.jsonl", &common::pairs_jsonl(1_050, 2));
    let out = run(
        dir.path(),
        &[
            "calib",
            "eval",
            "--input",
            "pairs.jsonl",
            "--bin-size",
            "100",
            "--samples",
            "50",
            "--out",
            "r.json",
            "--bins-csv",
            "bins.csv",
            "--svg",
            "curve.svg",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let svg = std::fs::read_to_string(dir.path().join("curve.svg")).unwrap();
    assert_eq!(svg.matches("<circle class=\"bin\"").count(), 10);
    assert!(svg.contains("class=\"diagonal\""));
    let csv = std::fs::read_to_string(dir.path().join("bins.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn malformed_line_exits_2_and_names_line() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.jsonl", "{\"q\": 0.4, \"y\": 1}\n{\"q\": 1.5, \"y\": 0}\n");
    let out = run(dir.path(), &["calib", "eval", "--input", "bad.jsonl", "--out", "r.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
    assert!(!dir.path().join("r.json").exists());
}

#[test]
fn missing_file_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["calib", "eval", "--input", "absent.jsonl"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("absent.jsonl"));
}

#[test]
fn bad_parameters_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pairs.jsonl", &common::pairs_jsonl(100, 3));
    let zero_bins = run(dir.path(), &["calib", "eval", "--input", "pairs.jsonl", "--bin-size", "0"]);
    assert_eq!(zero_bins.status.code(), Some(3));
    let one_sim = run(dir.path(), &["calib", "eval", "--input", "pairs.jsonl", "--samples", "1"]);
    assert_eq!(one_sim.status.code(), Some(3));
    let unknown_flag = run(dir.path(), &["calib", "eval", "--input", "pairs.jsonl", "--nope"]);
    assert_eq!(unknown_flag.status.code(), Some(3));
    let bad_period = run(dir.path(), &["events", "aggregate", "--corpus", "x", "--country", "IRQ", "--period", "week"]);
    assert_eq!(bad_period.status.code(), Some(3));
}

#[test]
fn help_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn small_input_warns_low_confidence() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pairs.jsonl", &common::pairs_jsonl(50, 4));
    let out = run(dir.path(), &["calib", "eval", "--input", "pairs.jsonl", "--samples", "20", "--out", "r.json"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("warning"));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["low_confidence"], true);
}

#[test]
fn csv_pairs_accepted() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pairs.csv", "0.2,0\n0.8,1\n0.6,1\n0.1,0\n");
    let out = run(dir.path(), &["calib", "decompose", "--input", "pairs.csv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["brier"].as_f64().unwrap() - (0.04 + 0.04 + 0.16 + 0.01) / 4.0).abs() < 1e-12);
}

#[test]
fn calib_curve_fixed_width() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pairs.jsonl", &common::pairs_jsonl(2_000, 5));
    let out = run(dir.path(), &["calib", "curve", "--input", "pairs.jsonl", "--width", "0.25", "--svg", "c.svg"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("lo,hi,q_hat,p_hat,size,stderr"));
    assert_eq!(csv.lines().count(), 5);
    let svg = std::fs::read_to_string(dir.path().join("c.svg")).unwrap();
    assert_eq!(svg.matches("<circle class=\"bin\"").count(), 4);
}

#[test]
fn coref_sample_one_record_per_pair() {
    let dir = tempfile::tempdir().unwrap();
    let docs = common::coref_jsonl(6, 6);
    write(dir.path(), "docs.jsonl", &docs);
    let out = run(
        dir.path(),
        &[
            "coref",
            "sample",
            "--scores",
            "docs.jsonl",
            "--num-samples",
            "1000",
            "--seed",
            "7",
            "--pairwise",
            "out.jsonl",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let expected: usize = docs
        .lines()
        .map(|l| {
            let n = serde_json::from_str::<serde_json::Value>(l).unwrap()["num_mentions"].as_u64().unwrap() as usize;
            n * (n - 1) / 2
        })
        .sum();
    let text = std::fs::read_to_string(dir.path().join("out.jsonl")).unwrap();
    assert_eq!(text.lines().count(), expected);
    for l in text.lines() {
        let q = serde_json::from_str::<serde_json::Value>(l).unwrap()["q"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&q));
    }
}

#[test]
fn coref_sample_needs_an_output() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "docs.jsonl", &common::coref_jsonl(1, 7));
    let out = run(dir.path(), &["coref", "sample", "--scores", "docs.jsonl"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn coref_bad_row_length_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "docs.jsonl", "{\"num_mentions\": 2, \"score_rows\": [[0.0], [1.0]]}\n");
    let out = run(dir.path(), &["coref", "sample", "--scores", "docs.jsonl", "--pairwise", "p.jsonl"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"));
}

#[test]
fn events_one_row_per_quarter() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = common::event_corpus(30, 8);
    write(dir.path(), "corpus.jsonl", &common::events_jsonl(&corpus));
    let out = run(
        dir.path(),
        &[
            "events",
            "aggregate",
            "--corpus",
            "corpus.jsonl",
            "--country",
            "IRQ",
            "--period",
            "quarter",
            "--samples",
            "100",
            "--seed",
            "7",
            "--out",
            "irq.csv",
            "--svg",
            "irq.svg",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let quarters: BTreeSet<String> =
        corpus.iter().map(|d| calibtk::events::Period::Quarter.start(d.date).to_string()).collect();
    let csv = std::fs::read_to_string(dir.path().join("irq.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(calibtk::formats::EVENTS_CSV_HEADER));
    let rows: BTreeSet<String> = lines.map(|l| l.split(',').nth(1).unwrap().to_owned()).collect();
    assert_eq!(rows, quarters);
    let svg = std::fs::read_to_string(dir.path().join("irq.svg")).unwrap();
    assert_eq!(svg.matches("class=\"band\"").count(), 1);
    assert_eq!(svg.matches("class=\"mean\"").count(), 1);
}

#[test]
fn seeds_change_sampled_outputs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "docs.jsonl", &common::coref_jsonl(4, 9));
    let args = |seed: &'static str, out: &'static str| {
        ["coref", "sample", "--scores", "docs.jsonl", "--num-samples", "200", "--seed", seed, "--pairwise", out]
    };
    assert!(run(dir.path(), &args("1", "a.jsonl")).status.success());
    assert!(run(dir.path(), &args("2", "b.jsonl")).status.success());
    let a = std::fs::read(dir.path().join("a.jsonl")).unwrap();
    let b = std::fs::read(dir.path().join("b.jsonl")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn tag_experiment_with_lattices() {
    let dir = tempfile::tempdir().unwrap();
    let lattice = serde_json::json!({
        "tags": ["A", "B"],
        "transitions": [[0.5, -0.5], [0.0, 0.2]],
        "emissions": [[[1.0, 0.0], [0.0, 1.0]], [[0.3, 0.1]]],
        "gold": [["A", "B"], ["B"]],
    });
    write(dir.path(), "lat.json", &lattice.to_string());
    let out = run(
        dir.path(),
        &["tag", "experiment", "--lattice", "lat.json", "--top-k", "5", "--bin-size", "2", "--samples", "10"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["num_tokens"], 3);
    assert_eq!(v["single"]["rows"].as_array().unwrap().len(), 2);
    // Only two labels exist, so asking for five warns.
    assert!(stderr(&out).contains("top 5"));
}

#[test]
fn tag_experiment_picks_pseudocount_on_dev() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "train.txt", &common::tagged_corpus(200, 10));
    write(dir.path(), "dev.txt", &common::tagged_corpus(50, 11));
    write(dir.path(), "test.txt", &common::tagged_corpus(50, 12));
    let out = run(
        dir.path(),
        &[
            "tag",
            "experiment",
            "--train",
            "train.txt",
            "--dev",
            "dev.txt",
            "--test",
            "test.txt",
            "--pseudocounts",
            "0.01,1,100",
            "--bin-size",
            "50",
            "--samples",
            "20",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let chosen = v["pseudocount"].as_f64().unwrap();
    assert!([0.01, 1.0, 100.0].contains(&chosen));
    assert!(v["tag_accuracy"].as_f64().unwrap() > 1.0 / 3.0);

    let ambiguous = run(
        dir.path(),
        &["tag", "experiment", "--train", "train.txt", "--test", "test.txt", "--pseudocounts", "0.1,1"],
    );
    assert_eq!(ambiguous.status.code(), Some(3));
}

#[test]
fn text_experiment_reports_both_models() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "train.jsonl", &common::text_jsonl(3_000, 13));
    write(dir.path(), "test.jsonl", &common::text_jsonl(3_000, 14));
    let out = run(
        dir.path(),
        &[
            "text",
            "experiment",
            "--train",
            "train.jsonl",
            "--test",
            "test.jsonl",
            "--bin-size",
            "600",
            "--samples",
            "100",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let err = |m: &str| v["models"][m]["calibration"]["calib_err"].as_f64().unwrap();
    assert!(err("naive_bayes") > err("logistic_regression"));
    assert_eq!(v["lr_converged"], true);
}
