//! The similarity measure: per-attribute kernel, record-level mean
//! similarity and its affine rescaling, and the derived distance.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::codec::EncodedDataset;
use crate::decompose::AttributeStats;
use crate::error::Error;
use crate::Result;

/// The attribute indices a comparison runs over: the columns where the
/// incomplete record still has a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonMask {
    indices: Vec<usize>,
}

impl ComparisonMask {
    /// Builds a mask from explicit attribute indices; duplicates collapse.
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        ComparisonMask { indices }
    }

    /// The mask for one encoded row: every attribute with a value.
    pub fn for_row(row: &[Option<f64>]) -> Self {
        ComparisonMask {
            indices: (0..row.len()).filter(|&i| row[i].is_some()).collect(),
        }
    }

    /// Like [`ComparisonMask::for_row`] but with one attribute always left
    /// out, whether or not the row has a value there.
    pub fn for_row_excluding(row: &[Option<f64>], excluded: usize) -> Self {
        ComparisonMask {
            indices: (0..row.len())
                .filter(|&i| i != excluded && row[i].is_some())
                .collect(),
        }
    }

    /// The attribute indices, in ascending order.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Number of attributes in the mask.
    pub fn m(&self) -> usize {
        self.indices.len()
    }

    /// True when the mask covers no attributes.
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// True when `attribute` is part of the mask.
    pub fn contains(&self, attribute: usize) -> bool {
        self.indices.binary_search(&attribute).is_ok()
    }
}

/// Similarity of two attribute values given the attribute's spread `sigma`.
///
/// For `sigma > 0` this is `0.5 * (1 + exp(-((v_i - v_j) / sigma)^2))`, which
/// lives in `(0.5, 1]` and hits 1 exactly when the values are equal. For
/// `sigma = 0` (a constant attribute) the analytic limit is used: 1 for equal
/// values, 0.5 otherwise.
pub fn sim_component(v_i: f64, v_j: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        if v_i == v_j {
            1.0
        } else {
            0.5
        }
    } else {
        let scaled = (v_i - v_j) / sigma;
        0.5 * (1.0 + libm::exp(-(scaled * scaled)))
    }
}

/// Mean of [`sim_component`] over the mask: `(1/m) * Σ_k sim(a_k, b_k, stddev_k)`.
pub fn mean_similarity(
    a: &[Option<f64>],
    b: &[Option<f64>],
    mask: &ComparisonMask,
    stats: &AttributeStats,
) -> Result<f64> {
    if mask.is_empty() {
        return Err(Error::ContractViolation(
            "similarity needs at least one attribute to compare",
        ));
    }
    let mut sum = 0.0;
    for &k in mask.indices() {
        let (Some(&Some(v_a)), Some(&Some(v_b))) = (a.get(k), b.get(k)) else {
            return Err(Error::ContractViolation(
                "both records must have values at every mask attribute",
            ));
        };
        let sigma = *stats
            .stddevs
            .get(k)
            .ok_or(Error::ContractViolation("mask index outside the schema"))?;
        sum += sim_component(v_a, v_b, sigma);
    }
    Ok(sum / mask.m() as f64)
}

/// Record-level similarity: `0.5 * (1 + mean_similarity)`, in `[0.75, 1]`.
pub fn immv(
    a: &[Option<f64>],
    b: &[Option<f64>],
    mask: &ComparisonMask,
    stats: &AttributeStats,
) -> Result<f64> {
    Ok(0.5 * (1.0 + mean_similarity(a, b, mask, stats)?))
}

/// Distance between two records given their record-level similarity:
/// `1 - immv_value`, in `[0, 0.25]`.
pub fn distance(immv_value: f64) -> Result<f64> {
    if !(0.75..=1.0).contains(&immv_value) {
        return Err(Error::ContractViolation(
            "record-level similarity must lie in [0.75, 1]",
        ));
    }
    Ok(1.0 - immv_value)
}

/// Similarity of one incomplete record against each complete donor.
#[derive(Debug, Clone, PartialEq)]
pub struct DonorScore {
    pub donor_id: String,
    pub mean_similarity: f64,
    pub immv: f64,
    pub distance: f64,
}

/// One subject's scores against every donor, in donor order, together with
/// the mask the comparison ran over.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityReport {
    pub subject_id: String,
    pub mask: ComparisonMask,
    pub rows: Vec<DonorScore>,
}

impl SimilarityReport {
    /// Index of the first donor with the highest mean similarity.
    pub fn best_index(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, row) in self.rows.iter().enumerate() {
            match best {
                Some(b) if self.rows[b].mean_similarity >= row.mean_similarity => {}
                _ => best = Some(i),
            }
        }
        best
    }
}

/// Scores `subject` against every donor using the subject's own mask (every
/// attribute where the subject has a value).
pub fn build_similarity_report(
    subject_id: &str,
    subject: &[Option<f64>],
    donors: &EncodedDataset,
    stats: &AttributeStats,
) -> Result<SimilarityReport> {
    let mask = ComparisonMask::for_row(subject);
    build_similarity_report_with_mask(subject_id, subject, &mask, donors, stats)
}

/// Scores `subject` against every donor over a caller-chosen mask.
pub fn build_similarity_report_with_mask(
    subject_id: &str,
    subject: &[Option<f64>],
    mask: &ComparisonMask,
    donors: &EncodedDataset,
    stats: &AttributeStats,
) -> Result<SimilarityReport> {
    if mask.is_empty() {
        return Err(Error::UnimputableRecord(subject_id.to_string()));
    }
    if donors.is_empty() {
        return Err(Error::InsufficientDonors {
            needed: 1,
            found: 0,
        });
    }
    for i in 0..donors.len() {
        if !donors.is_complete(i) {
            return Err(Error::ContractViolation(
                "donor records must be fully observed",
            ));
        }
    }
    let mut rows = Vec::with_capacity(donors.len());
    for (donor_id, donor) in donors.ids().iter().zip(donors.rows()) {
        let mean = mean_similarity(subject, donor, mask, stats)?;
        let immv_value = 0.5 * (1.0 + mean);
        rows.push(DonorScore {
            donor_id: donor_id.clone(),
            mean_similarity: mean,
            immv: immv_value,
            distance: distance(immv_value)?,
        });
    }
    Ok(SimilarityReport {
        subject_id: subject_id.to_string(),
        mask: mask.clone(),
        rows,
    })
}
