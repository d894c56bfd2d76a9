//! Text renderings of pipeline results: spread statistics, similarity
//! reports, provenance listings, and evaluation scores.

use std::fmt::Write as _;

use immv_core::{
    AttributeSpec, AttributeStats, CellProvenance, EvalReport, MethodSpec, SimilarityReport,
};

fn joined<I: IntoIterator<Item = String>>(cells: I, delimiter: u8) -> String {
    cells
        .into_iter()
        .collect::<Vec<_>>()
        .join(&(delimiter as char).to_string())
}

/// Two-row table of attribute names and standard deviations, followed by
/// key-value lines with the partition sizes and each deviation.
pub fn render_stats(
    schema: &[AttributeSpec],
    stats: &AttributeStats,
    incomplete: usize,
    delimiter: u8,
) -> String {
    let mut out = String::new();
    let names = joined(schema.iter().map(|spec| spec.name.clone()), delimiter);
    let values = joined(stats.stddevs.iter().map(f64::to_string), delimiter);
    let _ = writeln!(out, "{names}\n{values}\n");
    let _ = writeln!(out, "records={}", stats.records_used + incomplete);
    let _ = writeln!(out, "complete={}", stats.records_used);
    let _ = writeln!(out, "incomplete={incomplete}");
    for (spec, stddev) in schema.iter().zip(&stats.stddevs) {
        let _ = writeln!(out, "stddev.{}={stddev}", spec.name);
    }
    out
}

/// One line per subject/donor pair with all three scores.
pub fn render_similarity_reports(reports: &[SimilarityReport], delimiter: u8) -> String {
    let mut out = joined(
        ["subject", "donor", "mean_similarity", "immv", "distance"].map(str::to_string),
        delimiter,
    );
    out.push('\n');
    for report in reports {
        for row in &report.rows {
            let line = joined(
                [
                    report.subject_id.clone(),
                    row.donor_id.clone(),
                    row.mean_similarity.to_string(),
                    row.immv.to_string(),
                    row.distance.to_string(),
                ],
                delimiter,
            );
            let _ = writeln!(out, "{line}");
        }
    }
    out
}

/// One line per filled cell: receiving record, attribute name, donor, and
/// the donor's mean similarity.
pub fn render_provenance(
    provenance: &[CellProvenance],
    schema: &[AttributeSpec],
    delimiter: u8,
) -> String {
    let mut out = joined(
        ["record", "attribute", "donor", "similarity"].map(str::to_string),
        delimiter,
    );
    out.push('\n');
    for entry in provenance {
        let line = joined(
            [
                entry.record_id.clone(),
                schema[entry.attribute].name.clone(),
                entry.donor_id.clone(),
                entry.donor_similarity.to_string(),
            ],
            delimiter,
        );
        let _ = writeln!(out, "{line}");
    }
    out
}

/// Short display name for a method.
pub fn method_label(method: &MethodSpec) -> String {
    match method {
        MethodSpec::Immv => "immv".to_string(),
        MethodSpec::ModeMean => "mode".to_string(),
        MethodSpec::Knn { k } => format!("knn(k={k})"),
    }
}

fn fixed_or_na(value: Option<f64>) -> String {
    match value {
        Some(x) => format!("{x:.6}"),
        None => "n/a".to_string(),
    }
}

fn full_or_na(value: Option<f64>) -> String {
    match value {
        Some(x) => x.to_string(),
        None => "n/a".to_string(),
    }
}

/// Seed and rate header, an aligned per-method score table, and key-value
/// lines with every underlying count.
pub fn render_eval(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "seed={}", report.seed);
    let _ = writeln!(out, "rate={}\n", report.rate);

    let header = [
        "method",
        "categorical_accuracy",
        "numeric_nrmse",
        "unimputable",
    ];
    let mut table: Vec<[String; 4]> = vec![header.map(str::to_string)];
    for (method, scores) in &report.methods {
        table.push([
            method_label(method),
            fixed_or_na(scores.categorical_accuracy()),
            fixed_or_na(scores.numeric_nrmse),
            scores.unimputable_cells.to_string(),
        ]);
    }
    let widths: Vec<usize> = (0..4)
        .map(|col| table.iter().map(|row| row[col].len()).max().unwrap())
        .collect();
    for row in &table {
        let line = row
            .iter()
            .zip(&widths)
            .map(|(cell, width)| format!("{cell:<width$}"))
            .collect::<Vec<_>>()
            .join("  ");
        let _ = writeln!(out, "{}", line.trim_end());
    }
    out.push('\n');

    for (method, scores) in &report.methods {
        let label = method_label(method);
        let _ = writeln!(
            out,
            "method.{label}.categorical_total={}",
            scores.categorical_total
        );
        let _ = writeln!(
            out,
            "method.{label}.categorical_correct={}",
            scores.categorical_correct
        );
        let _ = writeln!(
            out,
            "method.{label}.categorical_accuracy={}",
            full_or_na(scores.categorical_accuracy())
        );
        let _ = writeln!(out, "method.{label}.numeric_total={}", scores.numeric_total);
        let _ = writeln!(
            out,
            "method.{label}.numeric_recovered={}",
            scores.numeric_recovered
        );
        let _ = writeln!(
            out,
            "method.{label}.nrmse={}",
            full_or_na(scores.numeric_nrmse)
        );
        let _ = writeln!(
            out,
            "method.{label}.unimputable={}",
            scores.unimputable_cells
        );
    }
    out
}
