//! Error type shared by every module of the crate.

use alloc::string::String;

/// Everything that can go wrong while building, encoding, scoring, or
/// imputing a dataset.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("attribute name must not be empty")]
    EmptyAttributeName,

    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),

    #[error("attribute `{name}` carries index {index}, expected {expected}")]
    AttributeIndexMismatch {
        name: String,
        index: usize,
        expected: usize,
    },

    #[error("{ids} record ids for {rows} rows")]
    IdCountMismatch { ids: usize, rows: usize },

    #[error("duplicate record id `{0}`")]
    DuplicateRecordId(String),

    #[error("record `{id}` has {found} cells, schema expects {expected}")]
    RowArity {
        id: String,
        found: usize,
        expected: usize,
    },

    #[error("record `{id}`, attribute `{attribute}`: {found} value in a {expected} column")]
    CellKindMismatch {
        id: String,
        attribute: String,
        found: &'static str,
        expected: &'static str,
    },

    #[error("record `{id}`, attribute `{attribute}`: number is not finite")]
    NonFiniteNumber { id: String, attribute: String },

    #[error("record `{id}`, attribute `{attribute}`: category label must not be empty")]
    EmptyCategoryLabel { id: String, attribute: String },

    #[error("record `{id}`, attribute `{attribute}`: unknown category label `{label}`")]
    UnknownLabel {
        id: String,
        attribute: String,
        label: String,
    },

    #[error(
        "record `{id}`, attribute `{attribute}`: code {code} is not a valid code in 1..={limit}"
    )]
    InvalidCode {
        id: String,
        attribute: String,
        code: f64,
        limit: usize,
    },

    #[error("need at least {needed} complete records, found {found}")]
    InsufficientDonors { needed: usize, found: usize },

    #[error("record `{0}` has no values to compare")]
    UnimputableRecord(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("contract violation: {0}")]
    ContractViolation(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
