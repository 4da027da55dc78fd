use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";

/// Rows of numbers with named columns; only tabular results can be written as CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// One command's machine-readable result.
#[derive(Debug, Clone, Serialize)]
pub struct CommandResult {
    pub schema_version: &'static str,
    pub command: String,
    pub inputs_echo: Value,
    pub outputs: Value,
    /// Wall time, only recorded with `--timing` so that output stays
    /// byte-stable otherwise.
    pub elapsed_seconds: Option<f64>,
    #[serde(skip)]
    pub table: Option<Table>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn csv_text(table: &Table) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io { path: "<csv>".into(), source: e.into() };
    w.write_record(&table.columns).map_err(io)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| format!("{v:?}"))).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io { path: "<csv>".into(), source: e.into_error() })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Renders a result in the requested format.
pub fn render(result: &CommandResult, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(result)
                .map_err(|e| Error::Json { path: "<stdout>".into(), source: e })?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => match &result.table {
            Some(t) => csv_text(t),
            None => Err(Error::invalid(format!("`{}` does not produce tabular output; use --format json", result.command))),
        },
    }
}

/// Writes a rendered result to `path`, or stdout when absent.
pub fn emit(result: &CommandResult, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(result, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io { path: p.display().to_string(), source: e }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::Io { path: "<stdout>".into(), source: e })
        }
    }
}
