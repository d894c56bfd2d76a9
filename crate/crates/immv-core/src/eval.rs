//! Recovery benchmarking: seeded random masking of a complete dataset,
//! baseline imputers to compare against, and scoring of recovered values
//! against the ground truth.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{build_codecs, decode, encode};
use crate::dataset::{AttributeKind, Dataset, Value};
use crate::decompose::{compute_attribute_stats, partition_records};
use crate::error::Error;
use crate::impute::{impute_dataset, TiePolicy};
use crate::Result;

/// One cell hidden by [`inject_mcar`], with the value it used to hold.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedCell {
    pub record: String,
    pub row: usize,
    pub attribute: usize,
    pub truth: Value,
}

/// The full masking plan: which cells were hidden and under what settings.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskPlan {
    pub seed: u64,
    pub rate: f64,
    /// Masked cells, sorted by row then attribute.
    pub cells: Vec<MaskedCell>,
}

/// Hides `floor(rate * cells)` cells of a complete dataset, drawn uniformly
/// from a generator seeded with `seed`; a draw that would leave a row with
/// no values is discarded and redrawn.
pub fn inject_mcar(d: &Dataset, rate: f64, seed: u64) -> Result<(Dataset, MaskPlan)> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidParameter(
            "rate must lie strictly between 0 and 1".to_string(),
        ));
    }
    if (0..d.len()).any(|i| !d.is_complete(i)) {
        return Err(Error::InvalidParameter(
            "input has missing cells; impute it first or supply complete data".to_string(),
        ));
    }
    let columns = d.schema().len();
    let target = libm::floor(rate * (d.len() * columns) as f64) as usize;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<(usize, usize)> = (0..d.len())
        .flat_map(|row| (0..columns).map(move |attribute| (row, attribute)))
        .collect();
    let mut remaining: Vec<usize> = (0..d.len()).map(|_| columns).collect();
    let mut selected: Vec<(usize, usize)> = Vec::with_capacity(target);
    while selected.len() < target {
        if candidates.is_empty() {
            return Err(Error::InvalidParameter(
                "rate leaves too few maskable cells without emptying a row".to_string(),
            ));
        }
        let pick = rng.random_range(0..candidates.len());
        let (row, attribute) = candidates.swap_remove(pick);
        if remaining[row] > 1 {
            remaining[row] -= 1;
            selected.push((row, attribute));
        }
    }
    selected.sort_unstable();

    let mut masked = d.clone();
    let mut cells = Vec::with_capacity(selected.len());
    for (row, attribute) in selected {
        cells.push(MaskedCell {
            record: d.ids()[row].clone(),
            row,
            attribute,
            truth: d.rows()[row][attribute].clone(),
        });
        masked.set_cell(row, attribute, Value::Missing)?;
    }
    Ok((masked, MaskPlan { seed, rate, cells }))
}

/// Fills missing categorical cells with the attribute's most frequent value
/// over complete records (ties broken by lexicographically smaller label)
/// and missing numeric cells with the attribute's mean over complete
/// records.
pub fn impute_mode_mean(d: &Dataset) -> Result<Dataset> {
    let complete: Vec<usize> = (0..d.len()).filter(|&i| d.is_complete(i)).collect();
    if complete.is_empty() {
        return Err(Error::InsufficientDonors {
            needed: 1,
            found: 0,
        });
    }
    let mut fills: Vec<Value> = Vec::with_capacity(d.schema().len());
    for spec in d.schema() {
        let fill = match spec.kind {
            AttributeKind::Numeric => {
                let mut sum = 0.0;
                for &row in &complete {
                    let Value::Number(x) = d.rows()[row][spec.index] else {
                        return Err(Error::ContractViolation(
                            "complete rows must hold values of the declared kind",
                        ));
                    };
                    sum += x;
                }
                Value::Number(sum / complete.len() as f64)
            }
            AttributeKind::Categorical => {
                let mut counts: Vec<(&str, usize)> = Vec::new();
                for &row in &complete {
                    let Value::Category(label) = &d.rows()[row][spec.index] else {
                        return Err(Error::ContractViolation(
                            "complete rows must hold values of the declared kind",
                        ));
                    };
                    match counts.iter_mut().find(|(known, _)| known == label) {
                        Some((_, count)) => *count += 1,
                        None => counts.push((label, 1)),
                    }
                }
                let (label, _) = counts
                    .iter()
                    .copied()
                    .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(a.0)))
                    .unwrap();
                Value::Category(label.to_string())
            }
        };
        fills.push(fill);
    }
    let mut filled = d.clone();
    for row in 0..d.len() {
        for spec in d.schema() {
            if filled.rows()[row][spec.index].is_missing() {
                filled.set_cell(row, spec.index, fills[spec.index].clone())?;
            }
        }
    }
    Ok(filled)
}

/// Fills each incomplete record from its `k` nearest complete records under
/// standardized Euclidean distance on encoded values over the record's
/// observed attributes.
///
/// Each attribute's difference is divided by the attribute's standard
/// deviation over complete records; a zero-deviation attribute contributes 0
/// for equal values and 1 otherwise. Donors are ranked by distance, then by
/// row order. Categorical cells are filled with the mode of the `k` donors
/// (ties to the smaller code), numeric cells with their mean. A record with
/// no observed values treats every donor as equally near.
pub fn impute_knn_euclidean(d: &Dataset, k: usize) -> Result<Dataset> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".to_string()));
    }
    let codecs = build_codecs(d);
    let encoded = encode(d, &codecs)?;
    let parts = partition_records(&encoded);
    if parts.complete.len() < k {
        return Err(Error::InsufficientDonors {
            needed: k,
            found: parts.complete.len(),
        });
    }
    let stats = compute_attribute_stats(&parts.complete)?;

    let mut rows = encoded.rows().to_vec();
    for &row_index in &parts.incomplete_indices {
        let subject = encoded.rows()[row_index].clone();
        let mut distances: Vec<(f64, usize)> = Vec::with_capacity(parts.complete.len());
        for (donor_index, donor) in parts.complete.rows().iter().enumerate() {
            let mut squared = 0.0;
            for attribute in 0..subject.len() {
                let Some(a) = subject[attribute] else {
                    continue;
                };
                let b = donor[attribute].unwrap();
                let sigma = stats.stddevs[attribute];
                squared += if sigma > 0.0 {
                    let scaled = (a - b) / sigma;
                    scaled * scaled
                } else if a == b {
                    0.0
                } else {
                    1.0
                };
            }
            distances.push((squared, donor_index));
        }
        distances.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(a.1.cmp(&b.1))
        });
        let mut nearest: Vec<usize> = distances[..k].iter().map(|&(_, i)| i).collect();
        nearest.sort_unstable();

        for attribute in 0..subject.len() {
            if subject[attribute].is_some() {
                continue;
            }
            let value = match encoded.codecs().for_attribute(attribute) {
                None => {
                    let sum: f64 = nearest
                        .iter()
                        .map(|&i| parts.complete.rows()[i][attribute].unwrap())
                        .sum();
                    sum / k as f64
                }
                Some(_) => {
                    let mut counts: Vec<(f64, usize)> = Vec::new();
                    for &i in &nearest {
                        let code = parts.complete.rows()[i][attribute].unwrap();
                        match counts.iter_mut().find(|(known, _)| *known == code) {
                            Some((_, count)) => *count += 1,
                            None => counts.push((code, 1)),
                        }
                    }
                    counts
                        .iter()
                        .copied()
                        .max_by(|a, b| {
                            a.1.cmp(&b.1)
                                .then(b.0.partial_cmp(&a.0).unwrap_or(core::cmp::Ordering::Equal))
                        })
                        .unwrap()
                        .0
                }
            };
            rows[row_index][attribute] = Some(value);
        }
    }
    decode(&crate::codec::EncodedDataset::from_validated_parts(
        encoded.schema().to_vec(),
        encoded.ids().to_vec(),
        rows,
        codecs,
    ))
}

/// Recovery metrics for one imputed dataset against one mask plan.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodScores {
    /// Masked categorical cells (recovered or not).
    pub categorical_total: usize,
    /// Masked categorical cells whose recovered label equals the truth.
    pub categorical_correct: usize,
    /// Masked numeric cells (recovered or not).
    pub numeric_total: usize,
    /// Masked numeric cells that received a value.
    pub numeric_recovered: usize,
    /// Masked cells still missing after imputation.
    pub unimputable_cells: usize,
    /// Mean over attributes of the attribute's root-mean-square error on
    /// recovered cells divided by the attribute's true range; `None` when no
    /// numeric cell was recovered.
    pub numeric_nrmse: Option<f64>,
}

impl MethodScores {
    /// Fraction of masked categorical cells recovered exactly; a cell left
    /// missing counts as wrong. `None` when no categorical cell was masked.
    pub fn categorical_accuracy(&self) -> Option<f64> {
        if self.categorical_total == 0 {
            None
        } else {
            Some(self.categorical_correct as f64 / self.categorical_total as f64)
        }
    }
}

/// Scores `imputed` against the plan's ground truth.
///
/// Categorical cells are compared on decoded labels. Each numeric
/// attribute's error is normalized by the attribute's range in the original
/// data, recovered from `imputed` by putting the truth back at every masked
/// position; a zero-range attribute scores 0.
pub fn score_imputation(imputed: &Dataset, plan: &MaskPlan) -> Result<MethodScores> {
    let mut scores = MethodScores {
        categorical_total: 0,
        categorical_correct: 0,
        numeric_total: 0,
        numeric_recovered: 0,
        unimputable_cells: 0,
        numeric_nrmse: None,
    };
    let mut squared_errors: Vec<(usize, f64, usize)> = Vec::new();
    for cell in &plan.cells {
        let in_range = cell.row < imputed.len()
            && cell.attribute < imputed.schema().len()
            && imputed.ids()[cell.row] == cell.record;
        if !in_range {
            return Err(Error::ContractViolation(
                "mask plan does not match the dataset",
            ));
        }
        match (&imputed.rows()[cell.row][cell.attribute], &cell.truth) {
            (Value::Missing, truth) => {
                scores.unimputable_cells += 1;
                match truth {
                    Value::Category(_) => scores.categorical_total += 1,
                    Value::Number(_) => scores.numeric_total += 1,
                    Value::Missing => {
                        return Err(Error::ContractViolation(
                            "mask plan truth must hold a value",
                        ))
                    }
                }
            }
            (Value::Category(found), Value::Category(truth)) => {
                scores.categorical_total += 1;
                if found == truth {
                    scores.categorical_correct += 1;
                }
            }
            (Value::Number(found), Value::Number(truth)) => {
                scores.numeric_total += 1;
                scores.numeric_recovered += 1;
                let error = found - truth;
                match squared_errors
                    .iter_mut()
                    .find(|(attribute, _, _)| *attribute == cell.attribute)
                {
                    Some((_, sum, count)) => {
                        *sum += error * error;
                        *count += 1;
                    }
                    None => squared_errors.push((cell.attribute, error * error, 1)),
                }
            }
            _ => {
                return Err(Error::ContractViolation(
                    "recovered cell kind does not match the truth",
                ))
            }
        }
    }

    if !squared_errors.is_empty() {
        squared_errors.sort_unstable_by_key(|&(attribute, _, _)| attribute);
        let mut total = 0.0;
        for &(attribute, sum, count) in &squared_errors {
            let rmse = libm::sqrt(sum / count as f64);
            let range = truth_range(imputed, plan, attribute)?;
            total += if range > 0.0 { rmse / range } else { 0.0 };
        }
        scores.numeric_nrmse = Some(total / squared_errors.len() as f64);
    }
    Ok(scores)
}

/// Range of one numeric attribute in the original data, rebuilt by putting
/// the plan's truth back at every masked position.
fn truth_range(imputed: &Dataset, plan: &MaskPlan, attribute: usize) -> Result<f64> {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for row in 0..imputed.len() {
        let masked = plan
            .cells
            .iter()
            .find(|cell| cell.row == row && cell.attribute == attribute);
        let value = match masked {
            Some(cell) => &cell.truth,
            None => &imputed.rows()[row][attribute],
        };
        let Value::Number(x) = value else {
            return Err(Error::ContractViolation(
                "numeric scoring hit a non-numeric cell",
            ));
        };
        min = min.min(*x);
        max = max.max(*x);
    }
    Ok(max - min)
}

/// Which imputer an evaluation run exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSpec {
    /// The similarity-based donor pipeline of this crate.
    Immv,
    /// Column mode (categorical) or mean (numeric) over complete records.
    ModeMean,
    /// Standardized-Euclidean nearest neighbors.
    Knn { k: usize },
}

/// Scores for every requested method on one masking experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub seed: u64,
    pub rate: f64,
    pub methods: Vec<(MethodSpec, MethodScores)>,
}

/// Masks `d` once, runs every requested method on the masked copy, and
/// scores each result against the same plan.
pub fn run_eval(
    d: &Dataset,
    rate: f64,
    seed: u64,
    methods: &[MethodSpec],
    policy: &TiePolicy,
) -> Result<EvalReport> {
    let (masked, plan) = inject_mcar(d, rate, seed)?;
    let mut scored = Vec::with_capacity(methods.len());
    for &method in methods {
        let imputed = match method {
            MethodSpec::Immv => impute_dataset(&masked, policy, None, false)?.completed,
            MethodSpec::ModeMean => impute_mode_mean(&masked)?,
            MethodSpec::Knn { k } => impute_knn_euclidean(&masked, k)?,
        };
        scored.push((method, score_imputation(&imputed, &plan)?));
    }
    Ok(EvalReport {
        seed,
        rate,
        methods: scored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::AttributeSpec;

    fn numeric_dataset(rows: &[&[f64]]) -> Dataset {
        let schema: Vec<AttributeSpec> = (0..rows[0].len())
            .map(|i| AttributeSpec::numeric(&alloc::format!("x{i}"), i))
            .collect();
        let values: Vec<Vec<Value>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| Value::Number(x)).collect())
            .collect();
        Dataset::new(schema, values).unwrap()
    }

    #[test]
    fn masking_is_deterministic_and_counts_cells() {
        let ds = numeric_dataset(&[
            &[1.0, 2.0, 3.0, 4.0],
            &[5.0, 6.0, 7.0, 8.0],
            &[9.0, 10.0, 11.0, 12.0],
        ]);
        let (masked_a, plan_a) = inject_mcar(&ds, 0.25, 7).unwrap();
        let (masked_b, plan_b) = inject_mcar(&ds, 0.25, 7).unwrap();
        assert_eq!(plan_a, plan_b);
        assert_eq!(masked_a, masked_b);
        assert_eq!(plan_a.cells.len(), 3);
        for pair in plan_a.cells.windows(2) {
            assert!((pair[0].row, pair[0].attribute) < (pair[1].row, pair[1].attribute));
        }
        for row in 0..masked_a.len() {
            assert!(masked_a.rows()[row].iter().any(|v| !v.is_missing()));
        }
    }

    #[test]
    fn masking_rejects_bad_rates_and_incomplete_input() {
        let ds = numeric_dataset(&[&[1.0], &[2.0]]);
        assert!(inject_mcar(&ds, 0.0, 1).is_err());
        assert!(inject_mcar(&ds, 1.0, 1).is_err());

        let schema = alloc::vec![AttributeSpec::numeric("x", 0)];
        let holey = Dataset::new(schema, alloc::vec![alloc::vec![Value::Missing]]).unwrap();
        assert!(inject_mcar(&holey, 0.5, 1).is_err());
    }

    #[test]
    fn masking_fails_when_every_draw_would_empty_a_row() {
        let ds = numeric_dataset(&[&[1.0], &[2.0], &[3.0]]);
        let err = inject_mcar(&ds, 0.5, 1).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    fn mixed_dataset() -> Dataset {
        let schema = alloc::vec![
            AttributeSpec::categorical("c", 0),
            AttributeSpec::numeric("x", 1),
        ];
        let rows = alloc::vec![
            alloc::vec![Value::Category("a".to_string()), Value::Number(1.0)],
            alloc::vec![Value::Category("b".to_string()), Value::Number(2.0)],
            alloc::vec![Value::Category("b".to_string()), Value::Number(6.0)],
            alloc::vec![Value::Missing, Value::Missing],
        ];
        Dataset::new(schema, rows).unwrap()
    }

    #[test]
    fn mode_mean_fills_by_frequency_and_average() {
        let filled = impute_mode_mean(&mixed_dataset()).unwrap();
        assert_eq!(filled.rows()[3][0], Value::Category("b".to_string()));
        assert_eq!(filled.rows()[3][1], Value::Number(3.0));
    }

    #[test]
    fn mode_ties_break_to_the_smaller_label() {
        let schema = alloc::vec![AttributeSpec::categorical("c", 0)];
        let rows = alloc::vec![
            alloc::vec![Value::Category("z".to_string())],
            alloc::vec![Value::Category("m".to_string())],
            alloc::vec![Value::Missing],
        ];
        let ds = Dataset::new(schema, rows).unwrap();
        let filled = impute_mode_mean(&ds).unwrap();
        assert_eq!(filled.rows()[2][0], Value::Category("m".to_string()));
    }

    #[test]
    fn mode_mean_needs_a_complete_record() {
        let schema = alloc::vec![AttributeSpec::numeric("x", 0)];
        let ds = Dataset::new(schema, alloc::vec![alloc::vec![Value::Missing]]).unwrap();
        assert!(matches!(
            impute_mode_mean(&ds),
            Err(Error::InsufficientDonors { .. })
        ));
    }

    #[test]
    fn nearest_neighbor_copies_an_exact_duplicate() {
        let schema = alloc::vec![
            AttributeSpec::numeric("x", 0),
            AttributeSpec::numeric("y", 1),
        ];
        let rows = alloc::vec![
            alloc::vec![Value::Number(1.0), Value::Number(10.0)],
            alloc::vec![Value::Number(8.0), Value::Number(20.0)],
            alloc::vec![Value::Number(8.0), Value::Missing],
        ];
        let ds = Dataset::new(schema, rows).unwrap();
        let filled = impute_knn_euclidean(&ds, 1).unwrap();
        assert_eq!(filled.rows()[2][1], Value::Number(20.0));
    }

    #[test]
    fn all_donor_average_matches_the_column_mean_exactly() {
        let ds = mixed_dataset();
        let knn = impute_knn_euclidean(&ds, 3).unwrap();
        let mode_mean = impute_mode_mean(&ds).unwrap();
        assert_eq!(knn.rows()[3][1], mode_mean.rows()[3][1]);
    }

    #[test]
    fn nearest_neighbor_rejects_bad_k() {
        let ds = mixed_dataset();
        assert!(matches!(
            impute_knn_euclidean(&ds, 0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            impute_knn_euclidean(&ds, 4),
            Err(Error::InsufficientDonors {
                needed: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn perfect_recovery_scores_full_accuracy_and_zero_error() {
        let schema = alloc::vec![
            AttributeSpec::categorical("c", 0),
            AttributeSpec::numeric("x", 1),
        ];
        let rows = alloc::vec![
            alloc::vec![Value::Category("a".to_string()), Value::Number(1.0)],
            alloc::vec![Value::Category("b".to_string()), Value::Number(2.0)],
            alloc::vec![Value::Category("b".to_string()), Value::Number(6.0)],
        ];
        let ds = Dataset::new(schema, rows).unwrap();
        let plan = MaskPlan {
            seed: 0,
            rate: 0.25,
            cells: alloc::vec![
                MaskedCell {
                    record: "R1".to_string(),
                    row: 0,
                    attribute: 0,
                    truth: Value::Category("a".to_string()),
                },
                MaskedCell {
                    record: "R2".to_string(),
                    row: 1,
                    attribute: 1,
                    truth: Value::Number(2.0),
                },
            ],
        };
        let scores = score_imputation(&ds, &plan).unwrap();
        assert_eq!(scores.categorical_accuracy(), Some(1.0));
        assert_eq!(scores.numeric_nrmse, Some(0.0));
        assert_eq!(scores.unimputable_cells, 0);
    }

    #[test]
    fn half_right_labels_and_one_range_sized_error_score_as_expected() {
        let schema = alloc::vec![
            AttributeSpec::categorical("c", 0),
            AttributeSpec::numeric("x", 1),
        ];
        let rows = alloc::vec![
            alloc::vec![Value::Category("a".to_string()), Value::Number(0.0)],
            alloc::vec![Value::Category("a".to_string()), Value::Number(10.0)],
            alloc::vec![Value::Category("a".to_string()), Value::Number(4.0)],
            alloc::vec![Value::Category("b".to_string()), Value::Number(16.0)],
        ];
        let imputed = Dataset::new(schema, rows).unwrap();
        let plan = MaskPlan {
            seed: 0,
            rate: 0.5,
            cells: alloc::vec![
                MaskedCell {
                    record: "R1".to_string(),
                    row: 0,
                    attribute: 0,
                    truth: Value::Category("a".to_string()),
                },
                MaskedCell {
                    record: "R2".to_string(),
                    row: 1,
                    attribute: 0,
                    truth: Value::Category("b".to_string()),
                },
                MaskedCell {
                    record: "R3".to_string(),
                    row: 2,
                    attribute: 1,
                    truth: Value::Number(4.0),
                },
                MaskedCell {
                    record: "R4".to_string(),
                    row: 3,
                    attribute: 1,
                    truth: Value::Number(6.0),
                },
            ],
        };
        let scores = score_imputation(&imputed, &plan).unwrap();
        assert_eq!(scores.categorical_accuracy(), Some(0.5));
        let nrmse = scores.numeric_nrmse.unwrap();
        assert!((nrmse - 1.0 / libm::sqrt(2.0)).abs() < 1e-12);
    }

    #[test]
    fn cells_left_missing_count_against_accuracy() {
        let schema = alloc::vec![AttributeSpec::categorical("c", 0)];
        let rows = alloc::vec![
            alloc::vec![Value::Missing],
            alloc::vec![Value::Category("a".to_string())],
        ];
        let imputed = Dataset::new(schema, rows).unwrap();
        let plan = MaskPlan {
            seed: 0,
            rate: 0.5,
            cells: alloc::vec![MaskedCell {
                record: "R1".to_string(),
                row: 0,
                attribute: 0,
                truth: Value::Category("a".to_string()),
            }],
        };
        let scores = score_imputation(&imputed, &plan).unwrap();
        assert_eq!(scores.unimputable_cells, 1);
        assert_eq!(scores.categorical_accuracy(), Some(0.0));
    }

    #[test]
    fn whole_runs_are_reproducible() {
        let ds = numeric_dataset(&[
            &[1.0, 2.0, 3.0],
            &[4.0, 5.0, 6.0],
            &[7.0, 8.0, 9.0],
            &[1.5, 2.5, 3.5],
            &[4.5, 5.5, 6.5],
        ]);
        let methods = [
            MethodSpec::Immv,
            MethodSpec::ModeMean,
            MethodSpec::Knn { k: 2 },
        ];
        let policy = TiePolicy::default();
        let first = run_eval(&ds, 0.2, 11, &methods, &policy).unwrap();
        let second = run_eval(&ds, 0.2, 11, &methods, &policy).unwrap();
        assert_eq!(first, second);
        assert_eq!(first.methods.len(), 3);
    }
}
