//! Donor selection and record filling: per incomplete record, pick the
//! complete record with the highest mean similarity and copy its values into
//! the missing cells.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::codec::{build_codecs, decode, encode, EncodedDataset};
use crate::dataset::{Dataset, Value};
use crate::decompose::{compute_attribute_stats, partition_records};
use crate::error::Error;
use crate::similarity::{build_similarity_report_with_mask, ComparisonMask, SimilarityReport};
use crate::Result;

/// How near-equal donor scores are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieRule {
    /// Fill each missing attribute with the most frequent value among the
    /// tied donors, breaking frequency ties by lowest donor row.
    ModeThenFirst,
    /// Fill every missing attribute from the lowest-row tied donor.
    First,
}

/// Tolerance and rule for breaking ties on the best donor score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiePolicy {
    /// Scores within `epsilon` of the maximum count as tied.
    pub epsilon: f64,
    pub rule: TieRule,
}

impl Default for TiePolicy {
    fn default() -> Self {
        TiePolicy {
            epsilon: 1e-9,
            rule: TieRule::ModeThenFirst,
        }
    }
}

/// Outcome of donor selection: the indices of all donors tied at the top
/// score, and the one donor that represents the choice.
///
/// Indices refer to rows of the [`SimilarityReport`] (equivalently, rows of
/// the donor set the report was built against).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DonorSelection {
    /// Donors within epsilon of the maximum mean similarity, ascending.
    pub tied: Vec<usize>,
    /// The lowest-index tied donor.
    pub chosen: usize,
}

/// Picks the donors tied at the maximum mean similarity.
pub fn select_donor(report: &SimilarityReport, policy: &TiePolicy) -> Result<DonorSelection> {
    if report.rows.is_empty() {
        return Err(Error::ContractViolation(
            "donor selection needs a non-empty report",
        ));
    }
    if policy.epsilon < 0.0 || policy.epsilon.is_nan() {
        return Err(Error::InvalidParameter(
            "epsilon must be nonnegative".to_string(),
        ));
    }
    let best = report
        .rows
        .iter()
        .map(|row| row.mean_similarity)
        .fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = report
        .rows
        .iter()
        .enumerate()
        .filter(|(_, row)| best - row.mean_similarity <= policy.epsilon)
        .map(|(i, _)| i)
        .collect();
    let chosen = tied[0];
    Ok(DonorSelection { tied, chosen })
}

/// Audit record for one filled cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellProvenance {
    pub record_id: String,
    pub attribute: usize,
    pub donor_id: String,
    /// The donating record's mean similarity from the report.
    pub donor_similarity: f64,
}

fn check_report_matches(report: &SimilarityReport, donors: &EncodedDataset) -> Result<()> {
    let aligned = report.rows.len() == donors.len()
        && report
            .rows
            .iter()
            .zip(donors.ids())
            .all(|(row, id)| row.donor_id == *id);
    if aligned {
        Ok(())
    } else {
        Err(Error::ContractViolation(
            "report rows must cover the donor set in order",
        ))
    }
}

/// Resolves the value one attribute receives from a donor selection, along
/// with the donor row that supplied it.
fn resolve_value(
    attribute: usize,
    selection: &DonorSelection,
    donors: &EncodedDataset,
    rule: TieRule,
) -> Result<(f64, usize)> {
    let value_at = |donor: usize| -> Result<f64> {
        donors.rows()[donor][attribute].ok_or(Error::ContractViolation(
            "donor records must be fully observed",
        ))
    };
    if rule == TieRule::First || selection.tied.len() == 1 {
        return Ok((value_at(selection.chosen)?, selection.chosen));
    }
    let mut counts: Vec<(f64, usize, usize)> = Vec::new();
    for &donor in &selection.tied {
        let value = value_at(donor)?;
        match counts.iter_mut().find(|(v, _, _)| *v == value) {
            Some((_, count, _)) => *count += 1,
            None => counts.push((value, 1, donor)),
        }
    }
    let (value, _, first_donor) = counts
        .iter()
        .copied()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)))
        .unwrap();
    Ok((value, first_donor))
}

/// Fills every missing cell of `subject` from the report's best donors.
///
/// Returns the completed row and one provenance entry per filled cell.
pub fn fill_record(
    subject: &[Option<f64>],
    report: &SimilarityReport,
    donors: &EncodedDataset,
    policy: &TiePolicy,
) -> Result<(Vec<Option<f64>>, Vec<CellProvenance>)> {
    check_report_matches(report, donors)?;
    let selection = select_donor(report, policy)?;
    let mut filled = subject.to_vec();
    let mut provenance = Vec::new();
    for (attribute, cell) in filled.iter_mut().enumerate() {
        if cell.is_some() {
            continue;
        }
        let (value, donor) = resolve_value(attribute, &selection, donors, policy.rule)?;
        *cell = Some(value);
        provenance.push(CellProvenance {
            record_id: report.subject_id.clone(),
            attribute,
            donor_id: report.rows[donor].donor_id.clone(),
            donor_similarity: report.rows[donor].mean_similarity,
        });
    }
    Ok((filled, provenance))
}

/// Why a record could not be filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnimputableReason {
    /// Every cell of the record is missing.
    AllMissing,
    /// The record has values only in columns excluded from comparison.
    NoComparableAttributes,
    /// Donor filtering left no records to draw from.
    NoEligibleDonors,
}

impl core::fmt::Display for UnimputableReason {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let text = match self {
            UnimputableReason::AllMissing => "all cells missing",
            UnimputableReason::NoComparableAttributes => "no comparable attributes",
            UnimputableReason::NoEligibleDonors => "no eligible donors",
        };
        f.write_str(text)
    }
}

/// Outcome of whole-dataset imputation.
#[derive(Debug, Clone, PartialEq)]
pub struct ImputationResult {
    /// The input dataset with missing cells filled where possible.
    pub completed: Dataset,
    /// One entry per filled cell, in record order.
    pub provenance: Vec<CellProvenance>,
    /// One report per imputed record, in record order.
    pub reports: Vec<SimilarityReport>,
    /// Records left unfilled, with the reason.
    pub unimputable: Vec<(String, UnimputableReason)>,
}

/// Runs the whole pipeline: encode, partition, compute spread statistics
/// over the complete part, then score and fill each incomplete record.
///
/// The donor pool is always the original complete part; freshly filled
/// records never become donors. When `class_column` is named it is excluded
/// from every comparison, and with `same_class_only` donors are restricted
/// to the subject's class whenever the subject's class is present.
pub fn impute_dataset(
    d: &Dataset,
    policy: &TiePolicy,
    class_column: Option<&str>,
    same_class_only: bool,
) -> Result<ImputationResult> {
    let class_index = class_column
        .map(|name| d.attribute_index(name))
        .transpose()?;
    let codecs = build_codecs(d);
    let encoded = encode(d, &codecs)?;
    let parts = partition_records(&encoded);
    if parts.complete.len() < 2 {
        return Err(Error::InsufficientDonors {
            needed: 2,
            found: parts.complete.len(),
        });
    }
    let stats = compute_attribute_stats(&parts.complete)?;

    let mut rows = encoded.rows().to_vec();
    let mut provenance = Vec::new();
    let mut reports = Vec::new();
    let mut unimputable = Vec::new();

    for (&row_index, subject_id) in parts.incomplete_indices.iter().zip(parts.incomplete.ids()) {
        let subject = &encoded.rows()[row_index];
        if subject.iter().all(Option::is_none) {
            unimputable.push((subject_id.clone(), UnimputableReason::AllMissing));
            continue;
        }
        let mask = match class_index {
            Some(excluded) => ComparisonMask::for_row_excluding(subject, excluded),
            None => ComparisonMask::for_row(subject),
        };
        if mask.is_empty() {
            unimputable.push((
                subject_id.clone(),
                UnimputableReason::NoComparableAttributes,
            ));
            continue;
        }
        let pool = match (class_index, same_class_only) {
            (Some(class), true) if subject[class].is_some() => {
                let class_value = subject[class];
                let matching: Vec<usize> = (0..parts.complete.len())
                    .filter(|&i| parts.complete.rows()[i][class] == class_value)
                    .collect();
                parts.complete.subset(&matching)
            }
            _ => parts.complete.clone(),
        };
        if pool.is_empty() {
            unimputable.push((subject_id.clone(), UnimputableReason::NoEligibleDonors));
            continue;
        }
        let report = build_similarity_report_with_mask(subject_id, subject, &mask, &pool, &stats)?;
        let (filled, cell_provenance) = fill_record(subject, &report, &pool, policy)?;
        rows[row_index] = filled;
        provenance.extend(cell_provenance);
        reports.push(report);
    }

    let completed = decode(&EncodedDataset::from_validated_parts(
        encoded.schema().to_vec(),
        encoded.ids().to_vec(),
        rows,
        codecs,
    ))?;
    Ok(ImputationResult {
        completed,
        provenance,
        reports,
        unimputable,
    })
}

/// Outcome of a class-label lookup for one record.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassAssignment {
    /// The record already carries a class value; nothing to assign.
    AlreadyKnown,
    /// The class value drawn from the best donors.
    Assigned(Value),
}

/// Assigns a class label from the report's best donors.
///
/// The class receives a value exactly as [`fill_record`] would give it; this
/// entry point just names the operation for callers that only want the
/// label. The report must have been built with the class column excluded
/// from its mask.
pub fn assign_class_label(
    subject: &[Option<f64>],
    report: &SimilarityReport,
    donors: &EncodedDataset,
    class_column: &str,
    policy: &TiePolicy,
) -> Result<ClassAssignment> {
    check_report_matches(report, donors)?;
    let class = donors
        .schema()
        .iter()
        .position(|spec| spec.name == class_column)
        .ok_or_else(|| Error::UnknownAttribute(class_column.to_string()))?;
    if subject.get(class).copied().flatten().is_some() {
        return Ok(ClassAssignment::AlreadyKnown);
    }
    let selection = select_donor(report, policy)?;
    let (value, _) = resolve_value(class, &selection, donors, policy.rule)?;
    let assigned = match donors.codecs().for_attribute(class) {
        Some(codec) => {
            let label = codec
                .label_for(value as usize)
                .ok_or(Error::ContractViolation(
                    "donor class code outside its codec",
                ))?;
            Value::Category(label.to_string())
        }
        None => Value::Number(value),
    };
    Ok(ClassAssignment::Assigned(assigned))
}
