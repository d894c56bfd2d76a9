//! Typed tabular data: attribute schema, cell values, and validated records.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// Declared type of a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeKind {
    /// Real-valued measurements.
    Numeric,
    /// Discrete labels.
    Categorical,
}

impl AttributeKind {
    fn name(self) -> &'static str {
        match self {
            AttributeKind::Numeric => "numeric",
            AttributeKind::Categorical => "categorical",
        }
    }
}

/// One column of the schema: a name, a kind, and its position in each row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttributeKind,
    pub index: usize,
}

impl AttributeSpec {
    /// Builds a numeric column spec.
    pub fn numeric(name: &str, index: usize) -> Self {
        AttributeSpec {
            name: name.to_string(),
            kind: AttributeKind::Numeric,
            index,
        }
    }

    /// Builds a categorical column spec.
    pub fn categorical(name: &str, index: usize) -> Self {
        AttributeSpec {
            name: name.to_string(),
            kind: AttributeKind::Categorical,
            index,
        }
    }
}

/// A single cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    /// The cell is empty and a candidate for imputation.
    Missing,
    /// A finite real number.
    Number(f64),
    /// A non-empty category label.
    Category(String),
}

impl Value {
    /// True when the cell holds no value.
    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Value::Missing => "missing",
            Value::Number(_) => "numeric",
            Value::Category(_) => "categorical",
        }
    }
}

/// A validated table: schema plus one row of cells per record.
///
/// Every row has exactly one cell per attribute, numeric columns hold only
/// finite numbers or [`Value::Missing`], and categorical columns hold only
/// non-empty labels or [`Value::Missing`]. Record ids are unique.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: Vec<AttributeSpec>,
    ids: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Dataset {
    /// Builds a dataset with generated record ids `R1`, `R2`, ...
    pub fn new(schema: Vec<AttributeSpec>, rows: Vec<Vec<Value>>) -> Result<Self> {
        let ids = (1..=rows.len()).map(|i| format!("R{i}")).collect();
        Dataset::with_ids(schema, ids, rows)
    }

    /// Builds a dataset with caller-supplied record ids, one per row.
    pub fn with_ids(
        schema: Vec<AttributeSpec>,
        ids: Vec<String>,
        rows: Vec<Vec<Value>>,
    ) -> Result<Self> {
        validate_schema(&schema)?;
        if ids.len() != rows.len() {
            return Err(Error::IdCountMismatch {
                ids: ids.len(),
                rows: rows.len(),
            });
        }
        for (i, id) in ids.iter().enumerate() {
            if ids[..i].contains(id) {
                return Err(Error::DuplicateRecordId(id.clone()));
            }
        }
        for (id, row) in ids.iter().zip(&rows) {
            validate_row(&schema, id, row)?;
        }
        Ok(Dataset { schema, ids, rows })
    }

    /// The column specs, in row order.
    pub fn schema(&self) -> &[AttributeSpec] {
        &self.schema
    }

    /// The record ids, in row order.
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// The rows of cells.
    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    /// Number of records.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// True when the dataset has no records.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Position of the named attribute.
    pub fn attribute_index(&self, name: &str) -> Result<usize> {
        self.schema
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    /// True when the row at `row_index` has no missing cells.
    pub fn is_complete(&self, row_index: usize) -> bool {
        self.rows[row_index].iter().all(|v| !v.is_missing())
    }

    /// Replaces one cell, revalidating it against the column kind.
    pub fn set_cell(&mut self, row_index: usize, attribute: usize, value: Value) -> Result<()> {
        let spec = &self.schema[attribute];
        let id = &self.ids[row_index];
        validate_cell(spec, id, &value)?;
        self.rows[row_index][attribute] = value;
        Ok(())
    }
}

fn validate_schema(schema: &[AttributeSpec]) -> Result<()> {
    for (i, spec) in schema.iter().enumerate() {
        if spec.name.is_empty() {
            return Err(Error::EmptyAttributeName);
        }
        if spec.index != i {
            return Err(Error::AttributeIndexMismatch {
                name: spec.name.clone(),
                index: spec.index,
                expected: i,
            });
        }
        if schema[..i].iter().any(|other| other.name == spec.name) {
            return Err(Error::DuplicateAttribute(spec.name.clone()));
        }
    }
    Ok(())
}

fn validate_row(schema: &[AttributeSpec], id: &str, row: &[Value]) -> Result<()> {
    if row.len() != schema.len() {
        return Err(Error::RowArity {
            id: id.to_string(),
            found: row.len(),
            expected: schema.len(),
        });
    }
    for (spec, value) in schema.iter().zip(row) {
        validate_cell(spec, id, value)?;
    }
    Ok(())
}

fn validate_cell(spec: &AttributeSpec, id: &str, value: &Value) -> Result<()> {
    match (spec.kind, value) {
        (_, Value::Missing) => Ok(()),
        (AttributeKind::Numeric, Value::Number(x)) => {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::NonFiniteNumber {
                    id: id.to_string(),
                    attribute: spec.name.clone(),
                })
            }
        }
        (AttributeKind::Categorical, Value::Category(label)) => {
            if label.is_empty() {
                Err(Error::EmptyCategoryLabel {
                    id: id.to_string(),
                    attribute: spec.name.clone(),
                })
            } else {
                Ok(())
            }
        }
        (_, other) => Err(Error::CellKindMismatch {
            id: id.to_string(),
            attribute: spec.name.clone(),
            found: other.kind_name(),
            expected: spec.kind.name(),
        }),
    }
}
