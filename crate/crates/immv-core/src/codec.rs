//! Label/code translation: category labels map to integer codes `1..=k` so
//! every cell can be treated as a real number.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dataset::{AttributeKind, AttributeSpec, Dataset, Value};
use crate::error::Error;
use crate::Result;

/// Bidirectional label/code map for one categorical attribute.
///
/// Labels are stored in ascending lexicographic order and a label's code is
/// its position plus one, so codes always run `1..=len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryCodec {
    labels: Vec<String>,
}

impl CategoryCodec {
    /// Builds a codec from a set of labels; duplicates collapse to one code.
    pub fn new(mut labels: Vec<String>) -> Self {
        labels.sort();
        labels.dedup();
        CategoryCodec { labels }
    }

    /// The labels in code order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of distinct labels.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// True when the codec has no labels.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The code for `label`, if the label is known.
    pub fn code_for(&self, label: &str) -> Option<usize> {
        self.labels
            .binary_search_by(|known| known.as_str().cmp(label))
            .ok()
            .map(|pos| pos + 1)
    }

    /// The label for `code`, if `code` is in `1..=len`.
    pub fn label_for(&self, code: usize) -> Option<&str> {
        code.checked_sub(1)
            .and_then(|pos| self.labels.get(pos))
            .map(String::as_str)
    }
}

/// One codec slot per attribute: `Some` for categorical columns, `None` for
/// numeric ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodecSet {
    codecs: Vec<Option<CategoryCodec>>,
}

impl CodecSet {
    /// The codec slots, in attribute order.
    pub fn codecs(&self) -> &[Option<CategoryCodec>] {
        &self.codecs
    }

    /// The codec for one attribute, if that attribute is categorical.
    pub fn for_attribute(&self, attribute: usize) -> Option<&CategoryCodec> {
        self.codecs.get(attribute).and_then(Option::as_ref)
    }
}

/// Collects the distinct labels of every categorical column, over all
/// records, into a [`CodecSet`].
pub fn build_codecs(dataset: &Dataset) -> CodecSet {
    let codecs = dataset
        .schema()
        .iter()
        .map(|spec| match spec.kind {
            AttributeKind::Numeric => None,
            AttributeKind::Categorical => {
                let labels = dataset
                    .rows()
                    .iter()
                    .filter_map(|row| match &row[spec.index] {
                        Value::Category(label) => Some(label.clone()),
                        _ => None,
                    })
                    .collect();
                Some(CategoryCodec::new(labels))
            }
        })
        .collect();
    CodecSet { codecs }
}

/// A dataset whose cells are all real numbers (`None` marks a missing cell).
///
/// Numeric cells carry their value unchanged; categorical cells carry their
/// label's code. The schema, record ids, and codecs ride along so the table
/// can be decoded back to labels.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedDataset {
    schema: Vec<AttributeSpec>,
    ids: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
    codecs: CodecSet,
}

impl EncodedDataset {
    /// Builds an encoded dataset, checking arity, finiteness, and that every
    /// categorical cell holds a valid integer code for its codec.
    pub fn new(
        schema: Vec<AttributeSpec>,
        ids: Vec<String>,
        rows: Vec<Vec<Option<f64>>>,
        codecs: CodecSet,
    ) -> Result<Self> {
        if codecs.codecs.len() != schema.len() {
            return Err(Error::ContractViolation(
                "codec set length must match schema length",
            ));
        }
        for (spec, codec) in schema.iter().zip(&codecs.codecs) {
            let aligned = match spec.kind {
                AttributeKind::Numeric => codec.is_none(),
                AttributeKind::Categorical => codec.is_some(),
            };
            if !aligned {
                return Err(Error::ContractViolation(
                    "codec slots must align with categorical columns",
                ));
            }
        }
        if ids.len() != rows.len() {
            return Err(Error::IdCountMismatch {
                ids: ids.len(),
                rows: rows.len(),
            });
        }
        let encoded = EncodedDataset {
            schema,
            ids,
            rows,
            codecs,
        };
        for (id, row) in encoded.ids.iter().zip(&encoded.rows) {
            if row.len() != encoded.schema.len() {
                return Err(Error::RowArity {
                    id: id.clone(),
                    found: row.len(),
                    expected: encoded.schema.len(),
                });
            }
            for (spec, cell) in encoded.schema.iter().zip(row) {
                if let Some(x) = cell {
                    check_encoded_cell(spec, encoded.codecs.for_attribute(spec.index), id, *x)?;
                }
            }
        }
        Ok(encoded)
    }

    pub(crate) fn from_validated_parts(
        schema: Vec<AttributeSpec>,
        ids: Vec<String>,
        rows: Vec<Vec<Option<f64>>>,
        codecs: CodecSet,
    ) -> Self {
        EncodedDataset {
            schema,
            ids,
            rows,
            codecs,
        }
    }

    /// The column specs, in row order.
    pub fn schema(&self) -> &[AttributeSpec] {
        &self.schema
    }

    /// The record ids, in row order.
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// The rows of encoded cells.
    pub fn rows(&self) -> &[Vec<Option<f64>>] {
        &self.rows
    }

    /// The codecs the dataset was encoded with.
    pub fn codecs(&self) -> &CodecSet {
        &self.codecs
    }

    /// Number of records.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// True when the dataset has no records.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// True when the row at `row_index` has no missing cells.
    pub fn is_complete(&self, row_index: usize) -> bool {
        self.rows[row_index].iter().all(Option::is_some)
    }

    pub(crate) fn subset(&self, indices: &[usize]) -> EncodedDataset {
        EncodedDataset {
            schema: self.schema.clone(),
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            codecs: self.codecs.clone(),
        }
    }
}

fn check_encoded_cell(
    spec: &AttributeSpec,
    codec: Option<&CategoryCodec>,
    id: &str,
    x: f64,
) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::NonFiniteNumber {
            id: id.to_string(),
            attribute: spec.name.clone(),
        });
    }
    if let Some(codec) = codec {
        let valid = x >= 1.0 && x <= codec.len() as f64 && libm::floor(x) == x;
        if !valid {
            return Err(Error::InvalidCode {
                id: id.to_string(),
                attribute: spec.name.clone(),
                code: x,
                limit: codec.len(),
            });
        }
    }
    Ok(())
}

/// Encodes every cell of `dataset` using `codecs`.
pub fn encode(dataset: &Dataset, codecs: &CodecSet) -> Result<EncodedDataset> {
    if codecs.codecs.len() != dataset.schema().len() {
        return Err(Error::ContractViolation(
            "codec set length must match schema length",
        ));
    }
    let mut rows = Vec::with_capacity(dataset.len());
    for (id, row) in dataset.ids().iter().zip(dataset.rows()) {
        let mut encoded_row = Vec::with_capacity(row.len());
        for (spec, value) in dataset.schema().iter().zip(row) {
            let cell = match value {
                Value::Missing => None,
                Value::Number(x) => Some(*x),
                Value::Category(label) => {
                    let codec =
                        codecs
                            .for_attribute(spec.index)
                            .ok_or(Error::ContractViolation(
                                "codec slots must align with categorical columns",
                            ))?;
                    let code = codec.code_for(label).ok_or_else(|| Error::UnknownLabel {
                        id: id.clone(),
                        attribute: spec.name.clone(),
                        label: label.clone(),
                    })?;
                    Some(code as f64)
                }
            };
            encoded_row.push(cell);
        }
        rows.push(encoded_row);
    }
    EncodedDataset::new(
        dataset.schema().to_vec(),
        dataset.ids().to_vec(),
        rows,
        codecs.clone(),
    )
}

/// Decodes every cell of `encoded` back to labels and numbers.
pub fn decode(encoded: &EncodedDataset) -> Result<Dataset> {
    let mut rows = Vec::with_capacity(encoded.len());
    for (id, row) in encoded.ids().iter().zip(encoded.rows()) {
        let mut decoded_row = Vec::with_capacity(row.len());
        for (spec, cell) in encoded.schema().iter().zip(row) {
            let value = match (cell, encoded.codecs.for_attribute(spec.index)) {
                (None, _) => Value::Missing,
                (Some(x), None) => Value::Number(*x),
                (Some(x), Some(codec)) => {
                    let code = *x as usize;
                    let label = if libm::floor(*x) == *x && *x >= 1.0 {
                        codec.label_for(code)
                    } else {
                        None
                    };
                    let label = label.ok_or_else(|| Error::InvalidCode {
                        id: id.clone(),
                        attribute: spec.name.clone(),
                        code: *x,
                        limit: codec.len(),
                    })?;
                    Value::Category(label.to_string())
                }
            };
            decoded_row.push(value);
        }
        rows.push(decoded_row);
    }
    Dataset::with_ids(encoded.schema().to_vec(), encoded.ids().to_vec(), rows)
}
