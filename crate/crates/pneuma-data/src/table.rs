use std::path::Path;

use crate::error::DataError;

/// One typed cell on its way into a [`Table`]; each variant has a canonical
/// text form, so tables round-trip through CSV byte-for-byte.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Rendered with 17 significant digits, which reproduces any 64-bit
    /// float exactly on re-parse.
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => format_f64_lossless(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// The canonical lossless rendering of a 64-bit float: scientific notation
/// with 17 significant digits (IEEE doubles survive a 17-digit decimal
/// round trip exactly).
pub fn format_f64_lossless(x: f64) -> String {
    format!("{x:.16e}")
}

/// A rectangular results table with a fixed column order, rendered to and
/// from CSV without losing a bit.
///
/// Cells are stored in their canonical text form, so `read → write`
/// reproduces a file this type wrote byte-for-byte.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    /// A new empty table with the given column names, in order.
    pub fn new<I, S>(columns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let columns: Vec<String> = columns.into_iter().map(Into::into).collect();
        assert!(!columns.is_empty(), "a table needs at least one column");
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    /// Appends a row; the cell count must match the column count.
    pub fn push_row<I>(&mut self, cells: I)
    where
        I: IntoIterator<Item = Cell>,
    {
        let row: Vec<String> = cells.into_iter().map(|c| c.render()).collect();
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width does not match the table"
        );
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Position of a named column.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Parses a named column as floats.
    pub fn f64_column(&self, name: &str) -> Result<Vec<f64>, DataError> {
        let idx = self.column_index(name).ok_or_else(|| DataError::Table {
            detail: format!("no column named `{name}`"),
        })?;
        self.rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row[idx].parse::<f64>().map_err(|_| DataError::Table {
                    detail: format!(
                        "row {r}, column `{name}`: `{}` is not a number",
                        row[idx]
                    ),
                })
            })
            .collect()
    }

    /// Renders the table as CSV (header row first, `\n` line endings,
    /// quoting only where needed).
    pub fn to_csv_string(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(&self.columns)
            .expect("writing to memory cannot fail");
        for row in &self.rows {
            writer.write_record(row).expect("writing to memory cannot fail");
        }
        let bytes = writer.into_inner().expect("flushing to memory cannot fail");
        String::from_utf8(bytes).expect("CSV output is UTF-8")
    }

    /// Parses a table from CSV text produced by [`Table::to_csv_string`]
    /// (or any CSV with a header row and rectangular rows).
    pub fn from_csv_str(text: &str) -> Result<Self, DataError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .from_reader(text.as_bytes());
        let columns: Vec<String> = reader
            .headers()
            .map_err(|e| DataError::Table {
                detail: format!("bad header: {e}"),
            })?
            .iter()
            .map(str::to_string)
            .collect();
        if columns.is_empty() {
            return Err(DataError::Table {
                detail: "empty header".to_string(),
            });
        }
        let mut rows = Vec::new();
        for (r, record) in reader.records().enumerate() {
            let record = record.map_err(|e| DataError::Table {
                detail: format!("row {r}: {e}"),
            })?;
            rows.push(record.iter().map(str::to_string).collect());
        }
        Ok(Table { columns, rows })
    }

    /// Writes the table to a CSV file.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<(), DataError> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    /// Reads a table from a CSV file.
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self, DataError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_csv_str(&text)
    }
}
