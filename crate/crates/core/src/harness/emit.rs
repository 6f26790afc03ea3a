//! CSV / JSON / gnuplot-data output.
//!
//! Floating-point values are written with 12 significant digits in every
//! format, so a CSV and a JSON rendering of the same rows parse back to
//! identical numbers.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::sweep::{OutputRow, SweepMode};
use super::verify::VerificationSummary;
use crate::bounds::{Outcome, RelationId, RelationOutcome};
use crate::error::{Error, Result};

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    /// Whitespace-separated columns with a `#` header, for gnuplot.
    Dat,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "dat" | "gnuplot" => Ok(Format::Dat),
            other => Err(format!("unknown format {other:?} (expected csv, json or dat)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Dat => "dat",
        })
    }
}

pub const VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"), "-g", env!("UREL_GIT_REV"));

pub fn version_string() -> String {
    VERSION.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resamples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<SweepMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_value: Option<f64>,
}

impl Metadata {
    pub fn new() -> Self {
        Metadata {
            version: version_string(),
            seed: None,
            shots: None,
            resamples: None,
            mode: None,
            fixed_value: None,
        }
    }
}

impl Default for Metadata {
    fn default() -> Self {
        Self::new()
    }
}

/// Round to [`SIGNIFICANT_DIGITS`] and print the shortest exact form.
pub fn fmt_sig(x: f64) -> String {
    let r = round_sig(x);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

pub fn sweep_columns(relations: &[RelationId]) -> Vec<String> {
    let mut cols: Vec<String> = ["theta", "phi", "lhs", "lhs_err"].map(String::from).to_vec();
    for r in relations {
        cols.push(r.label().to_string());
        cols.push(format!("{}_err", r.label()));
    }
    for r in relations {
        cols.push(format!("{}_holds", r.label()));
    }
    cols
}

enum Cell {
    Num(f64),
    Flag(bool),
}

fn row_cells(row: &OutputRow, relations: &[RelationId]) -> Vec<Cell> {
    let mut cells = vec![
        Cell::Num(row.theta),
        Cell::Num(row.phi),
        Cell::Num(row.lhs.value),
        Cell::Num(row.lhs.std_error),
    ];
    let values: Vec<_> = relations
        .iter()
        .map(|r| row.get(*r).expect("row has requested relation"))
        .collect();
    for v in &values {
        cells.push(Cell::Num(v.value.value));
        cells.push(Cell::Num(v.value.std_error));
    }
    cells.extend(values.iter().map(|v| Cell::Flag(v.holds)));
    cells
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Num(x) => fmt_sig(*x),
        Cell::Flag(b) => b.to_string(),
    }
}

pub fn write_sweep_csv<W: Write>(rows: &[OutputRow], relations: &[RelationId], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(sweep_columns(relations))?;
    for row in rows {
        w.write_record(row_cells(row, relations).iter().map(cell_text))?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn write_sweep_dat<W: Write>(
    rows: &[OutputRow],
    relations: &[RelationId],
    meta: &Metadata,
    mut out: W,
) -> Result<()> {
    let io = |e| Error::io("<dat>", e);
    writeln!(out, "# {}", serde_json::to_string(meta).expect("metadata serializes")).map_err(io)?;
    writeln!(out, "# {}", sweep_columns(relations).join(" ")).map_err(io)?;
    for row in rows {
        let line: Vec<String> = row_cells(row, relations)
            .iter()
            .map(|c| match c {
                Cell::Flag(b) => u8::from(*b).to_string(),
                num => cell_text(num),
            })
            .collect();
        writeln!(out, "{}", line.join(" ")).map_err(io)?;
    }
    Ok(())
}

pub fn sweep_json(rows: &[OutputRow], relations: &[RelationId], meta: &Metadata) -> Value {
    let cols = sweep_columns(relations);
    let rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (name, cell) in cols.iter().zip(row_cells(row, relations)) {
                let v = match cell {
                    Cell::Num(x) => json!(round_sig(x)),
                    Cell::Flag(b) => json!(b),
                };
                obj.insert(name.clone(), v);
            }
            Value::Object(obj)
        })
        .collect();
    json!({ "metadata": meta, "columns": cols, "rows": rows })
}

/// Open `dest` for writing, or stdout when `None`.
fn open(dest: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match dest {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Error::io(p, e))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json_value(value: &Value, dest: Option<&Path>) -> Result<()> {
    let path = dest.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf);
    let mut w = open(dest)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|source| Error::Json {
        context: path.display().to_string(),
        source,
    })?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| Error::io(&path, e))
}

/// Sidecar path for CSV metadata: `out.csv` -> `out.csv.meta.json`.
pub fn metadata_path(csv_path: &Path) -> PathBuf {
    let mut s = csv_path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Write sweep rows. CSV files get their metadata in a `.meta.json` sidecar
/// so the table itself stays header-plus-rows.
pub fn emit_sweep(
    rows: &[OutputRow],
    relations: &[RelationId],
    meta: &Metadata,
    format: Format,
    dest: Option<&Path>,
) -> Result<()> {
    match format {
        Format::Json => write_json_value(&sweep_json(rows, relations, meta), dest),
        Format::Csv => {
            let w = open(dest)?;
            write_sweep_csv(rows, relations, w).map_err(|e| relabel(e, dest))?;
            if let Some(p) = dest {
                write_json_value(&json!({ "metadata": meta }), Some(&metadata_path(p)))?;
            }
            Ok(())
        }
        Format::Dat => {
            let mut w = open(dest)?;
            write_sweep_dat(rows, relations, meta, &mut w).map_err(|e| relabel(e, dest))?;
            w.flush()
                .map_err(|e| Error::io(dest.unwrap_or(Path::new("<stdout>")), e))
        }
    }
}

fn relabel(e: Error, dest: Option<&Path>) -> Error {
    match (e, dest) {
        (Error::Io { source, .. }, Some(p)) => Error::io(p, source),
        (e, _) => e,
    }
}

fn summary_rows(summary: &VerificationSummary) -> Vec<Vec<String>> {
    summary
        .relations
        .iter()
        .map(|s| {
            let (slack, trial, seed) = match &s.min_slack {
                Some(t) => (fmt_sig(t.slack), t.trial.to_string(), t.trial_seed.to_string()),
                None => (String::new(), String::new(), String::new()),
            };
            vec![
                s.label.to_string(),
                s.relation.name().to_string(),
                s.evaluated.to_string(),
                s.violations.to_string(),
                slack,
                trial,
                seed,
            ]
        })
        .collect()
}

pub fn emit_summary(summary: &VerificationSummary, meta: &Metadata, format: Format, dest: Option<&Path>) -> Result<()> {
    match format {
        Format::Json => write_json_value(&json!({ "metadata": meta, "summary": summary }), dest),
        Format::Csv | Format::Dat => {
            let w = open(dest)?;
            let mut w = csv::WriterBuilder::new()
                .delimiter(if format == Format::Csv { b',' } else { b' ' })
                .from_writer(w);
            w.write_record([
                "label",
                "relation",
                "evaluated",
                "violations",
                "min_slack",
                "min_slack_trial",
                "min_slack_seed",
            ])?;
            for r in summary_rows(summary) {
                w.write_record(r)?;
            }
            w.flush()
                .map_err(|e| Error::io(dest.unwrap_or(Path::new("<stdout>")), e))
        }
    }
}

pub fn emit_outcomes(outcomes: &[RelationOutcome], meta: &Metadata, format: Format, dest: Option<&Path>) -> Result<()> {
    match format {
        Format::Json => write_json_value(&json!({ "metadata": meta, "relations": outcomes }), dest),
        Format::Csv | Format::Dat => {
            let w = open(dest)?;
            let mut w = csv::WriterBuilder::new()
                .delimiter(if format == Format::Csv { b',' } else { b' ' })
                .from_writer(w);
            w.write_record(["label", "pair", "lhs", "rhs", "slack", "holds", "skipped"])?;
            for o in outcomes {
                let pair = o.pair.map_or(String::new(), |(i, j)| format!("{i}-{j}"));
                let rec = match &o.outcome {
                    Outcome::Report(r) => vec![
                        o.label.to_string(),
                        pair,
                        fmt_sig(r.lhs),
                        fmt_sig(r.rhs),
                        fmt_sig(r.slack),
                        r.holds.to_string(),
                        String::new(),
                    ],
                    Outcome::Skipped(why) => vec![
                        o.label.to_string(),
                        pair,
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        why.to_string(),
                    ],
                };
                w.write_record(rec)?;
            }
            w.flush()
                .map_err(|e| Error::io(dest.unwrap_or(Path::new("<stdout>")), e))
        }
    }
}
