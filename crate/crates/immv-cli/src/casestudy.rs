//! A built-in worked example: a nine-record mixed dataset whose spread
//! statistics, donor scores, and filled rows were computed by hand with
//! high-precision arithmetic and embedded as expectations. Running it checks
//! the live pipeline against every expected value.

use std::fmt::Write as _;

use immv_core::{
    build_codecs, compute_attribute_stats, encode, impute_dataset, partition_records, Dataset,
    TiePolicy, Value,
};

use crate::table::{parse_table, TableError, TableOptions};

/// The example table in the default file format.
pub const FIXTURE: &str = "\
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

const EXPECTED_STDDEVS: [f64; 4] = [0.816497, 1.46385, 0.534522, 2.91139];

const EXPECTED_R3_SCORES: [(&str, f64); 7] = [
    ("R1", 0.750079),
    ("R2", 0.771048),
    ("R4", 0.6206),
    ("R6", 0.6206),
    ("R7", 0.717678),
    ("R8", 0.771595),
    ("R9", 0.699342),
];

const EXPECTED_R5_SCORES: [(&str, f64); 7] = [
    ("R1", 0.531219),
    ("R2", 0.671795),
    ("R4", 0.567994),
    ("R6", 0.542221),
    ("R7", 0.692853),
    ("R8", 0.835833),
    ("R9", 0.706354),
];

const EXPECTED_DONOR: &str = "R8";
const EXPECTED_MAPPED_ROWS: [(&str, &str); 2] = [("R3", "1,7,2,7"), ("R5", "3,3,2,7")];
const EXPECTED_FINAL_ROWS: [(&str, &str); 2] = [("R3", "a11,7,a32,7"), ("R5", "a13,3,a32,7")];

const TOLERANCE: f64 = 1e-4;

/// Rendered output of a run plus the number of failed checks.
pub struct CaseStudyOutcome {
    pub output: String,
    pub failures: usize,
}

struct Checker {
    output: String,
    total: usize,
    failures: usize,
}

impl Checker {
    fn section(&mut self, title: &str) {
        let _ = writeln!(self.output, "\n{title}");
    }

    fn number(&mut self, label: &str, found: f64, expected: f64) {
        let ok = (found - expected).abs() <= TOLERANCE;
        self.record(label, &format!("{found:.6}"), &format!("{expected:.6}"), ok);
    }

    fn text(&mut self, label: &str, found: &str, expected: &str) {
        let ok = found == expected;
        self.record(label, found, expected, ok);
    }

    fn record(&mut self, label: &str, found: &str, expected: &str, ok: bool) {
        let verdict = if ok { "ok" } else { "MISMATCH" };
        let _ = writeln!(
            self.output,
            "  {label}: {found} (expected {expected}) {verdict}"
        );
        self.total += 1;
        if !ok {
            self.failures += 1;
        }
    }
}

fn render_row(row: &[Value]) -> String {
    row.iter()
        .map(|value| match value {
            Value::Missing => "?".to_string(),
            Value::Number(x) => x.to_string(),
            Value::Category(label) => label.clone(),
        })
        .collect::<Vec<_>>()
        .join(",")
}

fn render_encoded_row(row: &[Option<f64>]) -> String {
    row.iter()
        .map(|cell| match cell {
            Some(x) => x.to_string(),
            None => "?".to_string(),
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Runs the pipeline on the embedded example and checks every value.
///
/// `corrupt` deliberately breaks one expectation to prove the checks can
/// fail.
pub fn run_case_study(corrupt: bool) -> Result<CaseStudyOutcome, TableError> {
    let dataset: Dataset = parse_table(FIXTURE, &TableOptions::default(), None)?;
    let codecs = build_codecs(&dataset);
    let encoded = encode(&dataset, &codecs)?;
    let parts = partition_records(&encoded);
    let stats = compute_attribute_stats(&parts.complete)?;
    let result = impute_dataset(&dataset, &TiePolicy::default(), None, false)?;

    let mut expected_stddevs = EXPECTED_STDDEVS;
    if corrupt {
        expected_stddevs[0] += 0.1;
    }

    let mut checker = Checker {
        output: format!(
            "worked example: {} records, {} attributes, {} with missing cells\n",
            dataset.len(),
            dataset.schema().len(),
            parts.incomplete.len()
        ),
        total: 0,
        failures: 0,
    };

    checker.section("spread of each attribute over the complete records");
    for (spec, (&found, &expected)) in dataset
        .schema()
        .iter()
        .zip(stats.stddevs.iter().zip(&expected_stddevs))
    {
        checker.number(&spec.name, found, expected);
    }

    for (report, expected_scores) in result
        .reports
        .iter()
        .zip([&EXPECTED_R3_SCORES, &EXPECTED_R5_SCORES])
    {
        checker.section(&format!(
            "mean similarity of {} to each donor",
            report.subject_id
        ));
        for (row, &(donor, expected)) in report.rows.iter().zip(expected_scores) {
            if row.donor_id == donor {
                checker.number(donor, row.mean_similarity, expected);
            } else {
                checker.text(donor, &row.donor_id, donor);
            }
        }
    }

    checker.section("chosen donors");
    for entry in &result.provenance {
        checker.text(
            &format!("{} <-", entry.record_id),
            &entry.donor_id,
            EXPECTED_DONOR,
        );
    }

    checker.section("filled rows, mapped form");
    let completed_encoded = encode(&result.completed, &codecs)?;
    for &(id, expected) in &EXPECTED_MAPPED_ROWS {
        let row = completed_encoded
            .ids()
            .iter()
            .position(|known| known == id)
            .unwrap();
        checker.text(
            id,
            &render_encoded_row(&completed_encoded.rows()[row]),
            expected,
        );
    }

    checker.section("filled rows, final form");
    for &(id, expected) in &EXPECTED_FINAL_ROWS {
        let row = result
            .completed
            .ids()
            .iter()
            .position(|known| known == id)
            .unwrap();
        checker.text(id, &render_row(&result.completed.rows()[row]), expected);
    }

    let _ = writeln!(
        checker.output,
        "\nchecks: {} passed, {} failed",
        checker.total - checker.failures,
        checker.failures
    );
    Ok(CaseStudyOutcome {
        output: checker.output,
        failures: checker.failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_on_the_clean_run() {
        let outcome = run_case_study(false).unwrap();
        assert_eq!(outcome.failures, 0);
        assert!(outcome.output.contains("ok"));
        assert!(!outcome.output.contains("MISMATCH"));
    }

    #[test]
    fn corrupting_an_expectation_is_detected() {
        let outcome = run_case_study(true).unwrap();
        assert_eq!(outcome.failures, 1);
        assert!(outcome.output.contains("MISMATCH"));
    }

    #[test]
    fn runs_are_byte_identical() {
        let first = run_case_study(false).unwrap();
        let second = run_case_study(false).unwrap();
        assert_eq!(first.output, second.output);
    }
}
