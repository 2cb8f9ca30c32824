use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use convfix_cli::ReportRecord;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn convfix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convfix")).args(args).output().expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).expect("UTF-8 output")
}

/// Runs a config and returns `(exit code, report text, summary text)`.
fn run_config(config: &Path, dir: &Path, tag: &str) -> (i32, String, String) {
    let out = dir.join(format!("{tag}.jsonl"));
    let summary = dir.join(format!("{tag}.csv"));
    let o = convfix(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(o.stderr.is_empty(), "{}", text(&o.stderr));
    let report = std::fs::read_to_string(out).unwrap_or_default();
    let summary = std::fs::read_to_string(summary).unwrap_or_default();
    (o.status.code().unwrap(), report, summary)
}

#[test]
fn default_config_exits_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report, summary) = run_config(&fixture("default.json"), dir.path(), "default");
    assert_eq!(code, 0);
    let records: Vec<ReportRecord> = report.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(records.iter().all(|r| r.verdict.name() != "fail"));
    for suite in ["measure", "fixedpoint", "ideals", "lp", "lattice", "dual", "abelian_prop", "mukherjea_dual"] {
        assert!(records.iter().any(|r| r.suite.name() == suite), "no {suite} records");
    }
    assert_eq!(summary.lines().count(), records.len() + 1);
}

#[test]
fn lattice_fixture_reports_the_binomial_value() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report, _) = run_config(&fixture("lattice.json"), dir.path(), "lattice");
    assert_eq!(code, 0);
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].contains(r#""power4_at_0":3.7500000000000000e-1"#), "{}", lines[0]);
    let record: ReportRecord = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(record.artifacts["power4_at_0"].as_f64(), Some(0.375));
}

#[test]
fn malformed_group_spec_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad.jsonl");
    let o = convfix(&["run", "--config", fixture("bad_group.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = text(&o.stderr);
    assert!(err.contains("groups[1]") && err.contains("cyclic:-1"), "{err}");
    assert!(!out.exists());
}

#[test]
fn unknown_suite_is_a_parse_error_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad.jsonl");
    let o = convfix(&["run", "--config", fixture("unknown_suite.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = text(&o.stderr);
    assert!(err.contains("line 2") && err.contains("spectral"), "{err}");
}

#[test]
fn missing_config_is_an_io_error() {
    let o = convfix(&["run", "--config", "/nonexistent/config.json", "--out", "/tmp/never.jsonl"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let (code_a, a, csv_a) = run_config(&fixture("small.json"), dir.path(), "a");
    let (code_b, b, csv_b) = run_config(&fixture("small.json"), dir.path(), "b");
    assert_eq!((code_a, code_b), (0, 0));
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert_eq!(csv_a, csv_b);
    let keys: Vec<(String, String)> = a
        .lines()
        .map(|l| serde_json::from_str::<ReportRecord>(l).unwrap())
        .map(|r| (r.suite.name().to_string(), r.case_id))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn thread_count_does_not_change_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = fixture("small.json");
    let mut reports = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("t{threads}.jsonl"));
        let o = convfix(&[
            "run",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert_eq!(o.status.code(), Some(0));
        reports.push(std::fs::read(out).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn replaying_a_record_reproduces_it_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let (_, report, _) = run_config(&fixture("small.json"), dir.path(), "replay");
    // one record per suite keeps the test quick
    let mut seen = std::collections::BTreeSet::new();
    for line in report.lines() {
        let record: ReportRecord = serde_json::from_str(line).unwrap();
        if !seen.insert(record.suite.name()) {
            continue;
        }
        let path = dir.path().join("case.json");
        std::fs::write(&path, line).unwrap();
        let o = convfix(&["explain", "--replay", path.to_str().unwrap(), "--json"]);
        assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
        assert_eq!(text(&o.stdout).trim_end(), line);
    }
    assert_eq!(seen.len(), 8);
}

#[test]
fn explain_by_case_id() {
    let dir = tempfile::tempdir().unwrap();
    let (_, report, _) = run_config(&fixture("small.json"), dir.path(), "lookup");
    let path = dir.path().join("lookup.jsonl");
    assert!(!report.is_empty());
    let args = |id: &'static str| {
        vec!["explain", "--report", path.to_str().unwrap(), "--suite", "fixedpoint", "--case-id", id]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>()
    };
    let found = Command::new(env!("CARGO_BIN_EXE_convfix")).args(args("cyclic:6/000004")).output().unwrap();
    assert_eq!(found.status.code(), Some(0), "{}", text(&found.stderr));
    assert!(text(&found.stdout).contains("case       cyclic:6/000004"));
    let missing = Command::new(env!("CARGO_BIN_EXE_convfix")).args(args("cyclic:6/999999")).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    assert!(text(&missing.stderr).contains("unknown case id"));
}

#[test]
fn explain_conflict_fixture_shows_the_witness() {
    let o = convfix(&["explain", "--replay", fixture("conflict_z4.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = text(&o.stdout);
    assert!(out.contains("conflict witness χ(3)=χ(1)³"), "{out}");
    assert!(out.contains("dim Fix L_ω   0"), "{out}");
}

#[test]
fn explain_rotation_fixture_shows_haar_limit() {
    let o = convfix(&["explain", "--replay", fixture("rotation_z4.json").to_str().unwrap()]);
    let out = text(&o.stdout);
    assert!(out.contains("= m_{cyclic:4}"), "{out}");
    let line = out.lines().find(|l| l.starts_with("‖S_4096 − ω̃‖")).expect("distance line");
    let distance: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(distance < 1e-9);
}

#[test]
fn explain_identity_fixture_fixes_everything() {
    let o = convfix(&["explain", "--replay", fixture("identity_z4.json").to_str().unwrap()]);
    assert!(text(&o.stdout).contains("dim Fix L_ω   4"));
}

#[test]
fn gen_measure_is_seeded_and_replayable() {
    let args = ["gen-measure", "--group", "cyclic:4", "--profile", "character-twisted", "--seed", "7"];
    let a = text(&convfix(&args).stdout);
    assert_eq!(a, text(&convfix(&args).stdout));
    let measure: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(measure["carrier"], "cyclic:4");
    let total: f64 = measure["atoms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["re"].as_f64().unwrap().hypot(a["im"].as_f64().unwrap()))
        .sum();
    assert!((total - 1.0).abs() < 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, &a).unwrap();
    let o = convfix(&["explain", "--replay", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o.stdout).contains("verdict    pass"));

    let bad = convfix(&["gen-measure", "--group", "cyclic:4", "--profile", "gaussian"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn group_dump_is_a_cayley_table() {
    let o = convfix(&["group", "--spec", "dihedral:4", "--dump"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&text(&o.stdout)).unwrap();
    assert_eq!(doc["order"], 8);
    assert_eq!(doc["abelian"], false);
    let table = doc["table"].as_array().unwrap();
    assert_eq!(table.len(), 8);
    let e = doc["identity"].as_u64().unwrap() as usize;
    for (a, row) in table.iter().enumerate() {
        assert_eq!(row[e].as_u64().unwrap() as usize, a);
    }
    let summary = text(&convfix(&["group", "--spec", "quaternion8"]).stdout);
    assert!(summary.starts_with("quaternion8: order 8, non-abelian, 6 subgroups"), "{summary}");
    assert_eq!(convfix(&["group", "--spec", "cyclic:-1"]).status.code(), Some(2));
}
