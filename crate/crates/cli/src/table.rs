//! CSV tables with a versioned schema line and JSON summaries.
//!
//! Every CSV starts with `#schema=<name>/v<version>:<col>,<col>,...`,
//! followed by a header row and the data rows. Floats are written in Rust's
//! shortest round-trip form, so a reader recovers the exact values. Bound
//! columns hold either a finite number or the literal `inapplicable`.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const INAPPLICABLE: &str = "inapplicable";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schema {
    pub name: &'static str,
    pub version: u32,
    pub columns: &'static [&'static str],
}

impl Schema {
    pub fn line(&self) -> String {
        format!("#schema={}/v{}:{}", self.name, self.version, self.columns.join(","))
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Finite value or [`INAPPLICABLE`].
pub fn fmt_bound(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => fmt_f64(x),
        _ => INAPPLICABLE.to_string(),
    }
}

pub fn parse_bound(s: &str) -> CliResult<Option<f64>> {
    if s == INAPPLICABLE {
        return Ok(None);
    }
    s.parse::<f64>()
        .map(Some)
        .map_err(|_| CliError::Usage(format!("bad numeric cell {s:?}")))
}

pub fn render_csv(schema: &Schema, rows: &[Vec<String>]) -> CliResult<Vec<u8>> {
    let mut out = Vec::new();
    writeln!(out, "{}", schema.line()).expect("write to Vec");
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(schema.columns)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != schema.columns.len() {
                return Err(CliError::Usage(format!(
                    "row {i} has {} cells, schema {} has {}",
                    row.len(),
                    schema.name,
                    schema.columns.len()
                )));
            }
            w.write_record(row)?;
        }
        w.flush().map_err(|e| CliError::io("<csv buffer>", e))?;
    }
    Ok(out)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_file(path, &bytes)
}

/// A CSV read back with its schema line.
#[derive(Debug, Clone)]
pub struct Table {
    pub schema_name: String,
    pub schema_version: u32,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Usage(m) => CliError::dataset(path, m),
            other => other,
        })
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
        let spec = first
            .strip_prefix("#schema=")
            .ok_or_else(|| CliError::Usage("missing #schema= line".into()))?;
        let (id, cols) = spec
            .split_once(':')
            .ok_or_else(|| CliError::Usage("malformed schema line".into()))?;
        let (name, version) = id
            .split_once("/v")
            .ok_or_else(|| CliError::Usage("schema id lacks a version".into()))?;
        let version = version
            .parse()
            .map_err(|_| CliError::Usage(format!("bad schema version {version:?}")))?;
        let declared: Vec<String> = cols.split(',').map(str::to_string).collect();

        let mut rdr = csv::Reader::from_reader(rest.as_bytes());
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if header != declared {
            return Err(CliError::Usage("header row does not match the schema line".into()));
        }
        let rows = rdr
            .records()
            .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<Result<Vec<Vec<String>>, _>>()?;
        Ok(Self {
            schema_name: name.to_string(),
            schema_version: version,
            columns: declared,
            rows,
        })
    }

    pub fn col(&self, name: &str) -> CliResult<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| CliError::Usage(format!("column {name:?} missing")))
    }

    pub fn f64_at(&self, row: usize, col: usize) -> CliResult<f64> {
        let s = &self.rows[row][col];
        s.parse()
            .map_err(|_| CliError::Usage(format!("row {row}: bad number {s:?}")))
    }
}

/// Mean and sample standard deviation (`n − 1`; `0` for one value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    /// `None` for an empty input. Sums run in input order.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(Self {
            count: values.len(),
            mean,
            std,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}
