//! Behavioral tests of the `immv` binary: file handling, exit statuses,
//! output formats, and determinism.

use std::path::Path;
use std::process::{Command, Output};

const FIXTURE: &str = "\
A1,A2,A3,A4
a11,5,a31,10
a13,7,a31,5
a11,7,?,7
a12,5,a31,10
a13,3,a32,?
a12,9,a31,10
a11,5,a32,3
a13,6,a32,7
a12,6,a32,10
";

const FIXTURE_IMPUTED: &str = "\
A1,A2,A3,A4
a11,5,a31,10
a13,7,a31,5
a11,7,a32,7
a12,5,a31,10
a13,3,a32,7
a12,9,a31,10
a11,5,a32,3
a13,6,a32,7
a12,6,a32,10
";

fn immv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_immv"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn impute_fills_the_fixture_and_leaves_the_input_alone() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.csv", FIXTURE);
    let output = dir.path().join("out.csv");
    let report = dir.path().join("report.csv");
    let provenance = dir.path().join("prov.csv");

    let run = immv(&[
        "impute",
        "--input",
        &input,
        "--output",
        output.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
        "--provenance",
        provenance.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0), "stderr: {}", stderr(&run));
    assert_eq!(std::fs::read_to_string(&output).unwrap(), FIXTURE_IMPUTED);
    assert_eq!(std::fs::read_to_string(&input).unwrap(), FIXTURE);

    let report = std::fs::read_to_string(&report).unwrap();
    assert!(report.starts_with("subject,donor,mean_similarity,immv,distance\n"));
    assert_eq!(report.lines().count(), 15);
    assert!(report.contains("R3,R8,0.77159"));

    let provenance = std::fs::read_to_string(&provenance).unwrap();
    assert!(provenance.starts_with("record,attribute,donor,similarity\n"));
    assert!(provenance.contains("R3,A3,R8,"));
    assert!(provenance.contains("R5,A4,R8,"));
}

#[test]
fn impute_writes_to_stdout_when_no_output_is_given() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.csv", FIXTURE);
    let run = immv(&["impute", "--input", &input]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(stdout(&run), FIXTURE_IMPUTED);
}

#[test]
fn complete_input_passes_through_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.csv", FIXTURE_IMPUTED);
    let run = immv(&["impute", "--input", &input]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(stdout(&run), FIXTURE_IMPUTED);
}

#[test]
fn unfillable_rows_warn_and_set_the_warning_status() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.csv", "a,b\n1,2\n3,4\n?,?\n5,?\n");
    let run = immv(&["impute", "--input", &input]);
    assert_eq!(run.status.code(), Some(1));
    assert!(stderr(&run).contains("warning: record R3 left unfilled: all cells missing"));
    let body = stdout(&run);
    assert!(body.contains("?,?"));
    assert!(!body.contains("5,?"));
}

#[test]
fn too_few_complete_records_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.csv", "a,b\n1,2\n3,?\n");
    let run = immv(&["impute", "--input", &input]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("at least 2 complete records"));
}

#[test]
fn missing_input_file_is_an_error() {
    let run = immv(&["impute", "--input", "/nonexistent/table.csv"]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("/nonexistent/table.csv"));
}

#[test]
fn stats_reports_partition_sizes_and_spreads() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.csv", FIXTURE);
    let run = immv(&["stats", "--input", &input]);
    assert_eq!(run.status.code(), Some(0));
    let body = stdout(&run);
    assert!(body.starts_with("A1,A2,A3,A4\n"));
    assert!(body.contains("records=9\ncomplete=7\nincomplete=2\n"));

    let stddev = |name: &str| -> f64 {
        body.lines()
            .find_map(|line| line.strip_prefix(&format!("stddev.{name}=")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((stddev("A1") - 0.816497).abs() < 1e-4);
    assert!((stddev("A2") - 1.46385).abs() < 1e-4);
    assert!((stddev("A3") - 0.534522).abs() < 1e-4);
    assert!((stddev("A4") - 2.91139).abs() < 1e-4);
}

#[test]
fn tab_delimited_input_works_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.tsv", &FIXTURE.replace(',', "\t"));
    let run = immv(&["impute", "--input", &input, "--delimiter", "\\t"]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(stdout(&run), FIXTURE_IMPUTED.replace(',', "\t"));
}

#[test]
fn schema_file_pins_column_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.csv", "code,x\n1,5\n2,6\n?,7\n2,8\n");
    let schema = write(dir.path(), "schema.csv", "code,categorical\n");
    let run = immv(&["impute", "--input", &input, "--schema", &schema]);
    assert_eq!(run.status.code(), Some(0));
    assert!(stdout(&run).lines().nth(3).unwrap().starts_with('2'));

    let bad = write(dir.path(), "bad.csv", "nope,numeric\n");
    let run = immv(&["impute", "--input", &input, "--schema", &bad]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("unknown column `nope`"));
}

#[test]
fn custom_missing_marker_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.csv", "a,b\nx,1\ny,2\nNA,3\nx,NA\n");
    let run = immv(&["impute", "--input", &input, "--missing-marker", "NA"]);
    assert_eq!(run.status.code(), Some(0));
    let body = stdout(&run);
    assert!(!body.contains("NA"));
}

#[test]
fn eval_is_reproducible_and_validates_its_rate() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.csv", FIXTURE_IMPUTED);
    let args = [
        "eval", "--input", &input, "--rate", "0.2", "--seed", "3", "--k", "2",
    ];
    let first = immv(&args);
    let second = immv(&args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    assert_eq!(first.stdout, second.stdout);
    let body = stdout(&first);
    assert!(body.starts_with("seed=3\nrate=0.2\n"));
    assert!(body.contains("method.immv."));
    assert!(body.contains("method.mode."));
    assert!(body.contains("method.knn(k=2)."));

    let run = immv(&["eval", "--input", &input, "--rate", "0"]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("rate"));
}

#[test]
fn eval_rejects_incomplete_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.csv", FIXTURE);
    let run = immv(&["eval", "--input", &input]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("impute it first or supply complete data"));
}

#[test]
fn eval_rejects_unknown_methods() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.csv", FIXTURE_IMPUTED);
    let run = immv(&["eval", "--input", &input, "--methods", "immv,median"]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("unknown method `median`"));
}

#[test]
fn casestudy_passes_cleanly_and_fails_when_corrupted() {
    let clean = immv(&["casestudy"]);
    assert_eq!(clean.status.code(), Some(0), "stderr: {}", stderr(&clean));
    let body = stdout(&clean);
    assert!(body.contains("0 failed"));
    assert!(!body.contains("MISMATCH"));

    let again = immv(&["casestudy"]);
    assert_eq!(clean.stdout, again.stdout);

    let corrupted = immv(&["casestudy", "--corrupt-expectations"]);
    assert_eq!(corrupted.status.code(), Some(2));
    assert!(stdout(&corrupted).contains("MISMATCH"));
}

#[test]
fn class_column_flags_drive_donor_filtering() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "in.csv",
        "x,y,label\n1,10,p\n1,20,q\n1,30,q\n1,?,q\n",
    );
    let run = immv(&[
        "impute",
        "--input",
        &input,
        "--class-column",
        "label",
        "--same-class-only",
    ]);
    assert_eq!(run.status.code(), Some(0), "stderr: {}", stderr(&run));

    let orphan = immv(&["impute", "--input", &input, "--same-class-only"]);
    assert_eq!(orphan.status.code(), Some(2));
}

#[test]
fn negative_epsilon_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.csv", FIXTURE);
    let run = immv(&["impute", "--input", &input, "--epsilon=-1"]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("epsilon"));
}
