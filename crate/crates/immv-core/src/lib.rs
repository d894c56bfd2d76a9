//! Missing-value imputation for mixed categorical/numeric tabular data.
//!
//! The pipeline fills missing cells by copying them from the most similar
//! complete record ("donor"):
//!
//! 1. build a [`Dataset`] of typed cells ([`dataset`]),
//! 2. map category labels to integer codes and encode every cell as a real
//!    number ([`codec`]),
//! 3. split the records into a complete part and an incomplete part and
//!    compute per-attribute standard deviations over the complete part
//!    ([`decompose`]),
//! 4. score each incomplete record against every complete record with a
//!    per-attribute exponential similarity kernel ([`similarity`]),
//! 5. copy the missing values from the highest-scoring donor ([`impute`]).
//!
//! [`eval`] adds a seeded masking harness plus mode/mean and standardized
//! k-NN baselines for measuring recovery quality against known ground truth.
//!
//! The crate is `no_std` (with `alloc`) and fully deterministic: identical
//! inputs produce bit-identical outputs.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod codec;
pub mod dataset;
pub mod decompose;
pub mod error;
pub mod eval;
pub mod impute;
pub mod similarity;

pub use codec::{build_codecs, decode, encode, CategoryCodec, CodecSet, EncodedDataset};
pub use dataset::{AttributeKind, AttributeSpec, Dataset, Value};
pub use decompose::{compute_attribute_stats, partition_records, AttributeStats, Partition};
pub use error::Error;
pub use eval::{
    impute_knn_euclidean, impute_mode_mean, inject_mcar, run_eval, score_imputation, EvalReport,
    MaskPlan, MaskedCell, MethodScores, MethodSpec,
};
pub use impute::{
    assign_class_label, fill_record, impute_dataset, select_donor, CellProvenance, ClassAssignment,
    DonorSelection, ImputationResult, TiePolicy, TieRule, UnimputableReason,
};
pub use similarity::{
    build_similarity_report, build_similarity_report_with_mask, distance, immv, mean_similarity,
    sim_component, ComparisonMask, DonorScore, SimilarityReport,
};

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
