//! File formats and command-line front end for the imputation pipeline in
//! `immv-core`.
//!
//! [`table`] reads and writes delimiter-separated tables with a missing-value
//! marker and optional explicit column kinds, [`render`] turns pipeline
//! results into line-oriented text reports, [`casestudy`] carries a built-in
//! worked example with self-checked expected values, and [`cli`] wires it all
//! to the `immv` binary.

pub mod casestudy;
pub mod cli;
pub mod render;
pub mod table;
