//! End-to-end tests of the binary: exit codes, report determinism, format
//! handling, and the documented example values.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_partition-metrics"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

fn write(path: &Path, contents: &str) {
    fs::write(path, contents).unwrap();
}

#[test]
fn score_identical_files_max_entropy_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.labels");
    write(&f, "a\na\nb\nb\nc\n");
    let out = run(&[
        "score",
        f.to_str().unwrap(),
        f.to_str().unwrap(),
        "--metric",
        "ami",
        "--model",
        "all",
        "--norm",
        "max-entropy",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["value"], 1.0);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["spec"]["normalization"], "max-entropy");
}

#[test]
fn score_boundary_pair_at_n2_is_minus_one() {
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.labels");
    let truth = dir.path().join("truth.labels");
    write(&pred, "x\nx\n");
    write(&truth, "x\ny\n");
    let out = run(&[
        "score",
        pred.to_str().unwrap(),
        truth.to_str().unwrap(),
        "--metric",
        "ami",
        "--model",
        "all",
        "--norm",
        "constant-logn",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["value"], -1.0);
}

#[test]
fn smi_against_one_partition_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.labels");
    let truth = dir.path().join("truth.labels");
    write(&pred, "a\na\nb\n");
    write(&truth, "z\nz\nz\n");
    let out = run(&[
        "score",
        pred.to_str().unwrap(),
        truth.to_str().unwrap(),
        "--metric",
        "smi",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn parse_errors_exit_two_with_stderr_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.labels");
    let good = dir.path().join("good.labels");
    write(&bad, "a b c\n");
    write(&good, "a\nb\nc\n");
    let out = run(&[
        "score",
        bad.to_str().unwrap(),
        good.to_str().unwrap(),
        "--metric",
        "ami",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.lines().count(), 1, "one-line diagnostic: {err}");

    // Mismatched element counts are also an input error.
    let two = dir.path().join("two.labels");
    write(&two, "a\nb\n");
    let out = run(&[
        "score",
        two.to_str().unwrap(),
        good.to_str().unwrap(),
        "--metric",
        "ami",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn labels_format_ignores_blanks_and_comments() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.labels");
    let b = dir.path().join("b.labels");
    write(&a, "# ground truth\nred\n\nred\nblue\n");
    write(&b, "0\n0\n1\n");
    let out = run(&[
        "score",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--metric",
        "ami",
        "--norm",
        "max-entropy",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["value"], 1.0);
    assert_eq!(v["inputs"]["n"], 3);
}

#[test]
fn json_format_accepts_non_canonical_input() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    write(&a, r#"{"n": 4, "assignment": [9, 9, 4, 4]}"#);
    write(&b, r#"{"n": 4, "assignment": [0, 0, 1, 1]}"#);
    let out = run(&[
        "score",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--metric",
        "ari",
        "--format",
        "json",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["value"], 1.0);
}

#[test]
fn expectation_examples() {
    let dir = tempfile::tempdir().unwrap();
    let np2 = dir.path().join("np2.labels");
    write(&np2, "a\nb\n");
    let out = run(&[
        "expectation",
        np2.to_str().unwrap(),
        "--stat",
        "mi",
        "--model",
        "all",
    ]);
    let v = stdout_json(&out);
    let mean = v["result"]["mean"].as_f64().unwrap();
    assert_eq!(mean, std::f64::consts::LN_2 / 2.0);

    let one = dir.path().join("one.labels");
    write(&one, "a\na\na\na\n");
    for model in ["all", "interior"] {
        let out = run(&[
            "expectation",
            one.to_str().unwrap(),
            "--stat",
            "mi",
            "--model",
            model,
        ]);
        let v = stdout_json(&out);
        assert_eq!(v["result"]["mean"].as_f64().unwrap(), 0.0, "model {model}");
    }
}

#[test]
fn expectation_exact_and_monte_carlo_agree_at_n8() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t8.labels");
    write(&t, "a\na\na\nb\nb\nc\nc\nd\n");
    let exact = stdout_json(&run(&[
        "expectation",
        t.to_str().unwrap(),
        "--stat",
        "mi",
        "--model",
        "all",
    ]))["result"]["mean"]
        .as_f64()
        .unwrap();
    let mc = stdout_json(&run(&[
        "expectation",
        t.to_str().unwrap(),
        "--stat",
        "mi",
        "--model",
        "all",
        "--method",
        "mc",
        "--samples",
        "100000",
        "--seed",
        "11",
    ]));
    let mean = mc["result"]["mean"].as_f64().unwrap();
    let stderr = mc["result"]["stderr"].as_f64().unwrap();
    assert!((mean - exact).abs() <= 4.0 * stderr);
    assert_eq!(mc["seed"], 11);
}

#[test]
fn verify_nfl_exit_codes() {
    // Pass on the full universe of five elements.
    let out = run(&[
        "verify-nfl",
        "--n",
        "5",
        "--metric",
        "ami",
        "--model",
        "all",
        "--truths",
        "all",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["result"]["lambda"].as_f64().unwrap().abs() <= 1e-9);
    assert_eq!(v["result"]["passes"], true);

    // Measured failure for the fixed-shape model: exit 4, report still
    // printed.
    let out = run(&[
        "verify-nfl",
        "--n",
        "5",
        "--metric",
        "ami",
        "--model",
        "perm",
        "--truths",
        "all",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["passes"], false);
    assert!(v["result"]["boundary_deviation"].as_f64().unwrap() > 1e-6);

    // Empty universe: exit 2.
    let out = run(&[
        "verify-nfl",
        "--n",
        "2",
        "--metric",
        "ami",
        "--model",
        "interior",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_examples() {
    let v = stdout_json(&run(&["count", "--n", "3", "--model", "all"]));
    assert_eq!(v["result"]["count"], "5");
    let v = stdout_json(&run(&["count", "--n", "3", "--shape", "2,1"]));
    assert_eq!(v["result"]["count"], "3");
    let v = stdout_json(&run(&["count", "--n", "12", "--model", "all"]));
    assert_eq!(v["result"]["count"], "4213597");
    let v = stdout_json(&run(&["count", "--n", "4", "--blocks", "2"]));
    assert_eq!(v["result"]["count"], "7");
}

#[test]
fn enumerate_streams_and_round_trips_as_labels() {
    let out = run(&["enumerate", "--n", "4", "--model", "all"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 15);
    assert_eq!(lines[0], "0 0 0 0");
    assert_eq!(lines[14], "0 1 2 3");

    // Re-ingest enumerated assignments as labels-per-line clusterings. The
    // Rand index is 1 exactly when two partitions are identical, so scoring
    // re-ingested files against each other proves the round trip is
    // faithful: 1.0 on the diagonal, below 1.0 off it.
    let dir = tempfile::tempdir().unwrap();
    let as_file = |line: &str, name: &str| {
        let f = dir.path().join(name);
        let per_line: String = line.split(' ').collect::<Vec<_>>().join("\n");
        write(&f, &format!("{per_line}\n"));
        f
    };
    for (i, line) in lines.iter().enumerate() {
        let a = as_file(line, "a.labels");
        let other = &lines[(i + 7) % lines.len()];
        let b = as_file(other, "b.labels");
        let same = stdout_json(&run(&[
            "score",
            a.to_str().unwrap(),
            a.to_str().unwrap(),
            "--metric",
            "ari",
        ]));
        assert_eq!(same["result"]["value"], 1.0, "line {line}");
        let cross = stdout_json(&run(&[
            "score",
            a.to_str().unwrap(),
            b.to_str().unwrap(),
            "--metric",
            "ari",
        ]));
        assert!(
            cross["result"]["value"].as_f64().unwrap() < 1.0,
            "distinct lines {line} vs {other} must not collide"
        );
    }
}

#[test]
fn enumerate_respects_limit_and_model_filters() {
    let out = run(&["enumerate", "--n", "13", "--model", "all"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["enumerate", "--n", "4", "--shape", "2,2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);

    let out = run(&["enumerate", "--n", "4", "--blocks", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 6);

    let out = run(&["enumerate", "--n", "4", "--model", "interior"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 13);
}

#[test]
fn sample_is_seed_deterministic() {
    let a = run(&["sample", "--n", "6", "--count", "20", "--seed", "42"]);
    let b = run(&["sample", "--n", "6", "--count", "20", "--seed", "42"]);
    let c = run(&["sample", "--n", "6", "--count", "20", "--seed", "43"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    // Perm sampling needs an explicit shape here.
    let out = run(&["sample", "--n", "4", "--count", "2", "--model", "perm"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["sample", "--n", "4", "--count", "5", "--shape", "2,1,1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn reports_are_byte_identical_modulo_timing() {
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("p.labels");
    let truth = dir.path().join("t.labels");
    write(&pred, "a\nb\na\nc\n");
    write(&truth, "x\nx\ny\ny\n");
    let args = [
        "score",
        pred.to_str().unwrap(),
        truth.to_str().unwrap(),
        "--metric",
        "ami",
        "--method",
        "mc",
        "--samples",
        "5000",
        "--seed",
        "7",
    ];
    let mut a = stdout_json(&run(&args));
    let mut b = stdout_json(&run(&args));
    a.as_object_mut().unwrap().remove("timing_ms");
    b.as_object_mut().unwrap().remove("timing_ms");
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn free_morsel_report_via_cli() {
    let out = run(&["free-morsel", "--n", "5", "--model", "perm"]);
    let v = stdout_json(&out);
    let entries = v["result"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    for e in entries {
        assert!(e["max_interior_deviation"].as_f64().unwrap() <= 1e-9);
        assert!(e["boundary_gap"].as_f64().unwrap() > 1e-6);
    }
    assert_eq!(v["result"]["gap_decreases"], true);
}
