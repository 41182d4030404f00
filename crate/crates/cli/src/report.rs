use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A finished command: the canonical JSON document, an optional CSV table,
/// and whether every check in it passed.
#[derive(Debug)]
pub struct Report {
    json: String,
    csv: Option<String>,
    pub passed: bool,
}

impl Report {
    pub fn new<T: Serialize>(body: &T, passed: bool) -> CliResult<Self> {
        let mut json = serde_json::to_string_pretty(body)?;
        json.push('\n');
        Ok(Report {
            json,
            csv: None,
            passed,
        })
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, format: Format) -> CliResult<&str> {
        match format {
            Format::Json => Ok(&self.json),
            Format::Csv => self.csv.as_deref().ok_or_else(|| {
                CliError::Usage("this command has no CSV output; use --format json".into())
            }),
        }
    }
}

/// Comma-separated table with a header row and LF line endings.
pub fn csv_table<R: AsRef<[String]>>(header: &[&str], rows: &[R]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.as_ref().join(","));
    }
    out
}

pub fn cell(v: f64) -> String {
    format!("{v:?}")
}

pub fn optional_cell(v: Option<f64>) -> String {
    v.map(cell).unwrap_or_default()
}
