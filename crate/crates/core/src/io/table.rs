//! CSV tables. Exact fractions are written as `num/den`; approximate float
//! columns carry a `_float` suffix.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CsvTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) -> Result<()> {
        let row: Vec<String> = row.into_iter().map(|s| s.to_string()).collect();
        if row.len() != self.headers.len() {
            return Err(Error::Schema(format!(
                "row has {} fields, schema has {}",
                row.len(),
                self.headers.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("missing column {name:?}")))
    }

    pub fn to_csv(&self) -> Result<String> {
        write_csv(&self.headers, &self.rows)
    }
}

pub fn write_csv<H: AsRef<str>>(headers: &[H], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(headers.iter().map(AsRef::as_ref))
        .map_err(io)?;
    for (i, row) in rows.iter().enumerate() {
        if row.len() != headers.len() {
            return Err(Error::Schema(format!(
                "row {i} has {} fields, schema has {}",
                row.len(),
                headers.len()
            )));
        }
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Reads a CSV with a header row; `expected` (if given) must match it.
pub fn read_csv(text: &str, expected: Option<&[&str]>) -> Result<CsvTable> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = r
        .headers()
        .map_err(|e| Error::Schema(e.to_string()))?
        .iter()
        .map(String::from)
        .collect();
    if let Some(exp) = expected {
        if headers.iter().map(String::as_str).ne(exp.iter().copied()) {
            return Err(Error::Schema(format!(
                "header {headers:?}, expected {exp:?}"
            )));
        }
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Schema(e.to_string()))?;
        rows.push(rec.iter().map(String::from).collect());
    }
    Ok(CsvTable { headers, rows })
}
