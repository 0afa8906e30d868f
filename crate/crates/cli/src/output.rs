//! Run metadata, JSON and CSV rendering.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

/// Echo of everything needed to regenerate a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub command: String,
    pub params: Value,
    pub seed: u64,
    pub format: Format,
}

/// A CSV table; `name` becomes a file-name suffix when several are written.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: Vec<&'static str>) -> Self {
        Table { name: name.into(), header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Result of a subcommand before rendering.
pub struct Report {
    pub result: Value,
    pub tables: Vec<Table>,
    /// Whether the run counts as a failure (exit code 2) despite completing.
    pub failed: bool,
}

/// Formats a float for CSV: shortest round-trip digits, empty for NaN.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

pub fn render_json(meta: &Meta, result: &Value) -> String {
    let doc = serde_json::json!({ "meta": meta, "result": result });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable report");
    s.push('\n');
    s
}

fn render_csv(meta: &Meta, table: &Table) -> Result<String, CliError> {
    let mut out = Vec::new();
    writeln!(out, "# version={}", meta.version).unwrap();
    writeln!(out, "# command={}", meta.command).unwrap();
    writeln!(out, "# params={}", meta.params).unwrap();
    writeln!(out, "# seed={}", meta.seed).unwrap();
    writeln!(out, "# table={}", table.name).unwrap();
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut out);
        w.write_record(&table.header).map_err(CliError::io)?;
        for row in &table.rows {
            w.write_record(row).map_err(CliError::io)?;
        }
        w.flush().map_err(CliError::io)?;
    }
    Ok(String::from_utf8(out).expect("utf-8 csv"))
}

fn with_suffix(path: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Writes the report to `out` (or stdout).
///
/// A CSV run with several tables and an output path writes one file per
/// table, `<stem>_<table>.csv`, plus `<stem>_summary.json`.
pub fn emit(meta: &Meta, report: &Report, out: Option<&Path>) -> Result<(), CliError> {
    match (meta.format, out) {
        (Format::Json, Some(path)) => write_file(path, &render_json(meta, &report.result)),
        (Format::Json, None) => {
            print!("{}", render_json(meta, &report.result));
            Ok(())
        }
        (Format::Csv, _) if report.tables.is_empty() => {
            Err(CliError::Usage(format!("command {} has no CSV output", meta.command)))
        }
        (Format::Csv, Some(path)) if report.tables.len() > 1 => {
            for table in &report.tables {
                write_file(&with_suffix(path, &table.name, "csv"), &render_csv(meta, table)?)?;
            }
            write_file(&with_suffix(path, "summary", "json"), &render_json(meta, &report.result))
        }
        (Format::Csv, Some(path)) => write_file(path, &render_csv(meta, &report.tables[0])?),
        (Format::Csv, None) => {
            let parts: Vec<String> = report
                .tables
                .iter()
                .map(|t| render_csv(meta, t))
                .collect::<Result<_, _>>()?;
            print!("{}", parts.join("\n"));
            Ok(())
        }
    }
}

/// Reads the metadata back from a JSON report or the `#` lines of a CSV.
pub fn read_meta(path: &Path) -> Result<Meta, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config is not valid JSON: {e}")))?;
        return serde_json::from_value(doc.get("meta").cloned().unwrap_or(Value::Null))
            .map_err(|e| CliError::Usage(format!("config has no usable meta object: {e}")));
    }
    let field = |key: &str| {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("# {key}=")))
            .map(str::to_string)
            .ok_or_else(|| CliError::Usage(format!("config CSV lacks a '# {key}=' line")))
    };
    let params = serde_json::from_str(&field("params")?)
        .map_err(|e| CliError::Usage(format!("config params are not valid JSON: {e}")))?;
    let seed = field("seed")?
        .parse()
        .map_err(|e| CliError::Usage(format!("config seed: {e}")))?;
    Ok(Meta {
        version: field("version")?,
        command: field("command")?,
        params,
        seed,
        format: Format::Csv,
    })
}
