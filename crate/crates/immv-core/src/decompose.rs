//! Splitting a table into its complete and incomplete parts, and the
//! per-attribute spread statistics taken over the complete part.

use alloc::vec::Vec;

use crate::codec::EncodedDataset;
use crate::error::Error;
use crate::Result;

/// The two halves of a table: records with no missing cells and records with
/// at least one, each paired with the row indices they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub complete: EncodedDataset,
    pub incomplete: EncodedDataset,
    pub complete_indices: Vec<usize>,
    pub incomplete_indices: Vec<usize>,
}

/// Splits `encoded` into complete and incomplete parts, preserving row order
/// within each part.
pub fn partition_records(encoded: &EncodedDataset) -> Partition {
    let (complete_indices, incomplete_indices): (Vec<usize>, Vec<usize>) =
        (0..encoded.len()).partition(|&i| encoded.is_complete(i));
    Partition {
        complete: encoded.subset(&complete_indices),
        incomplete: encoded.subset(&incomplete_indices),
        complete_indices,
        incomplete_indices,
    }
}

/// Per-attribute sample standard deviations over one set of records.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeStats {
    /// One standard deviation per attribute, in schema order.
    pub stddevs: Vec<f64>,
    /// How many records the statistics were taken over.
    pub records_used: usize,
}

/// Computes the sample standard deviation (`n - 1` denominator) of every
/// attribute over `complete`, which must hold only fully observed records.
///
/// Fewer than two records leave the deviation undefined, so that is an error;
/// a constant column yields a deviation of zero.
pub fn compute_attribute_stats(complete: &EncodedDataset) -> Result<AttributeStats> {
    let n = complete.len();
    if n < 2 {
        return Err(Error::InsufficientDonors {
            needed: 2,
            found: n,
        });
    }
    let mut stddevs = Vec::with_capacity(complete.schema().len());
    for attribute in 0..complete.schema().len() {
        let mut sum = 0.0;
        for row in complete.rows() {
            let x = row[attribute].ok_or(Error::ContractViolation(
                "attribute statistics require fully observed records",
            ))?;
            sum += x;
        }
        let mean = sum / n as f64;
        let mut squares = 0.0;
        for row in complete.rows() {
            let diff = row[attribute].unwrap() - mean;
            squares += diff * diff;
        }
        stddevs.push(libm::sqrt(squares / (n - 1) as f64));
    }
    Ok(AttributeStats {
        stddevs,
        records_used: n,
    })
}
