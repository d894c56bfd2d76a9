//! Reading and writing datasets as delimiter-separated text.
//!
//! The first line is a header of column names. Cells equal to the missing
//! marker (after whitespace trimming) become missing values. Column kinds
//! default to inference: a column is numeric when every non-missing cell
//! parses as a finite number, categorical otherwise; an explicit schema can
//! override inference per column.

use std::io::Write as _;

use immv_core::{AttributeKind, AttributeSpec, Dataset, Value};

/// Delimiter and missing-value marker for one table format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableOptions {
    pub delimiter: u8,
    pub missing_marker: String,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            delimiter: b',',
            missing_marker: "?".to_string(),
        }
    }
}

/// Everything that can go wrong while reading a table or a schema file.
#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("empty input: expected at least a header line")]
    EmptyInput,

    #[error(
        "row {row}, column `{column}`: empty cell; pass --missing-marker \"\" \
         to treat empty cells as missing"
    )]
    EmptyCell { row: usize, column: String },

    #[error("row {row}, column `{column}`: `{cell}` is not a number")]
    NumberSyntax {
        row: usize,
        column: String,
        cell: String,
    },

    #[error("schema line {line}: expected `name,kind` with kind numeric or categorical")]
    SchemaSyntax { line: usize },

    #[error("schema names unknown column `{0}`")]
    SchemaUnknownColumn(String),

    #[error(transparent)]
    Format(#[from] csv::Error),

    #[error(transparent)]
    Data(#[from] immv_core::Error),
}

fn read_records(text: &str, delimiter: u8) -> Result<Vec<Vec<String>>, TableError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for record in reader.records() {
        let record = record?;
        records.push(record.iter().map(str::to_string).collect());
    }
    Ok(records)
}

/// Parses delimiter-separated text into a typed dataset.
///
/// `schema_hint` pins the kind of any column it names; unnamed columns fall
/// back to inference. Record ids are generated as `R1..Rn`.
pub fn parse_table(
    text: &str,
    options: &TableOptions,
    schema_hint: Option<&[(String, AttributeKind)]>,
) -> Result<Dataset, TableError> {
    let records = read_records(text, options.delimiter)?;
    let Some((header, body)) = records.split_first() else {
        return Err(TableError::EmptyInput);
    };

    let mut cells: Vec<Vec<Option<&str>>> = Vec::with_capacity(body.len());
    for (row_number, row) in body.iter().enumerate() {
        let mut parsed = Vec::with_capacity(row.len());
        for (cell, name) in row.iter().zip(header) {
            if *cell == options.missing_marker {
                parsed.push(None);
            } else if cell.is_empty() {
                return Err(TableError::EmptyCell {
                    row: row_number + 2,
                    column: name.clone(),
                });
            } else {
                parsed.push(Some(cell.as_str()));
            }
        }
        cells.push(parsed);
    }

    if let Some(hint) = schema_hint {
        for (name, _) in hint {
            if !header.contains(name) {
                return Err(TableError::SchemaUnknownColumn(name.clone()));
            }
        }
    }
    let parses_numeric = |cell: &str| cell.parse::<f64>().is_ok_and(f64::is_finite);
    let schema: Vec<AttributeSpec> = header
        .iter()
        .enumerate()
        .map(|(index, name)| {
            let hinted = schema_hint.and_then(|hint| {
                hint.iter()
                    .find(|(hint_name, _)| hint_name == name)
                    .map(|&(_, kind)| kind)
            });
            let kind = hinted.unwrap_or_else(|| {
                let numeric = cells
                    .iter()
                    .filter_map(|row| row.get(index).copied().flatten())
                    .all(parses_numeric);
                if numeric {
                    AttributeKind::Numeric
                } else {
                    AttributeKind::Categorical
                }
            });
            AttributeSpec {
                name: name.clone(),
                kind,
                index,
            }
        })
        .collect();

    let mut rows = Vec::with_capacity(cells.len());
    for (row_number, row) in cells.iter().enumerate() {
        let mut values = Vec::with_capacity(row.len());
        for (spec, cell) in schema.iter().zip(row) {
            let value = match cell {
                None => Value::Missing,
                Some(text) => match spec.kind {
                    AttributeKind::Numeric => {
                        let number = text.parse::<f64>().map_err(|_| TableError::NumberSyntax {
                            row: row_number + 2,
                            column: spec.name.clone(),
                            cell: (*text).to_string(),
                        })?;
                        Value::Number(number)
                    }
                    AttributeKind::Categorical => Value::Category((*text).to_string()),
                },
            };
            values.push(value);
        }
        rows.push(values);
    }
    Ok(Dataset::new(schema, rows)?)
}

/// Serializes a dataset back to delimiter-separated text.
///
/// Numbers are written with full round-trip precision and missing cells as
/// the marker, so reparsing with the same options restores the dataset.
/// Labels equal to the marker or carrying surrounding whitespace do not
/// survive a round trip.
pub fn write_table(d: &Dataset, options: &TableOptions) -> String {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(options.delimiter)
        .from_writer(Vec::new());
    writer
        .write_record(d.schema().iter().map(|spec| spec.name.as_str()))
        .unwrap();
    for row in d.rows() {
        let cells: Vec<String> = row
            .iter()
            .map(|value| match value {
                Value::Missing => options.missing_marker.clone(),
                Value::Number(x) => x.to_string(),
                Value::Category(label) => label.clone(),
            })
            .collect();
        writer.write_record(&cells).unwrap();
    }
    writer.flush().unwrap();
    String::from_utf8(writer.into_inner().unwrap()).unwrap()
}

/// Parses a schema file: one `name,kind` line per column, with kind
/// `numeric` or `categorical`. Blank lines are skipped.
pub fn parse_schema_hint(text: &str) -> Result<Vec<(String, AttributeKind)>, TableError> {
    let mut hint = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let entry = line.split_once(',').and_then(|(name, kind)| {
            let kind = match kind.trim() {
                "numeric" => AttributeKind::Numeric,
                "categorical" => AttributeKind::Categorical,
                _ => return None,
            };
            Some((name.trim().to_string(), kind))
        });
        match entry {
            Some(entry) if !entry.0.is_empty() => hint.push(entry),
            _ => return Err(TableError::SchemaSyntax { line: number + 1 }),
        }
    }
    Ok(hint)
}

/// Writes `text` to `path`, or to standard output when `path` is `None`.
pub fn emit(path: Option<&std::path::Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}
