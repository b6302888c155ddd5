//! Post-run checks on emitted CSV files.
//!
//! Trial tables are checked for soundness (no observed displacement above a
//! bound, no SOD gap above its bound) and their JSON summary is recomputed
//! from the rows and compared field by field.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::summary_path;
use crate::error::{CliError, CliResult};
use crate::experiments::{PULL_SCHEMA, TIGHTNESS_SCHEMA};
use crate::table::Table;
use crate::trials::{summarize, TrialRecord, TRIAL_SCHEMA};

/// Tolerance when comparing recomputed summary numbers.
pub const SUMMARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryCheck {
    pub path: String,
    pub max_diff: f64,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub schema: String,
    pub rows: usize,
    pub violations: usize,
    /// First few offending rows, as `row <i>: <reason>`.
    pub details: Vec<String>,
    pub summary: Option<SummaryCheck>,
    pub ok: bool,
}

fn num_close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= SUMMARY_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Walks `expected` and records every place where `actual` differs.
fn compare(path: &str, expected: &Value, actual: &Value, out: &mut Vec<String>, max_diff: &mut f64) {
    match (expected, actual) {
        (Value::Number(e), Value::Number(a)) => {
            let (e, a) = (e.as_f64().unwrap_or(f64::NAN), a.as_f64().unwrap_or(f64::NAN));
            *max_diff = max_diff.max((e - a).abs());
            if !num_close(e, a) {
                out.push(format!("{path}: expected {e}, found {a}"));
            }
        }
        (Value::Object(e), Value::Object(a)) => {
            for (k, ev) in e {
                match a.get(k) {
                    Some(av) => compare(&format!("{path}.{k}"), ev, av, out, max_diff),
                    None => out.push(format!("{path}.{k}: missing")),
                }
            }
        }
        (Value::Array(e), Value::Array(a)) if e.len() == a.len() => {
            for (i, (ev, av)) in e.iter().zip(a).enumerate() {
                compare(&format!("{path}[{i}]"), ev, av, out, max_diff);
            }
        }
        (e, a) if e == a => {}
        _ => out.push(format!("{path}: expected {expected}, found {actual}")),
    }
}

const MAX_DETAILS: usize = 20;

/// Validates `csv`. `slack` overrides the slack stored in the summary.
pub fn validate(csv: &Path, summary: Option<&Path>, slack: Option<f64>) -> CliResult<ValidationReport> {
    let table = Table::read(csv)?;
    let default_summary = summary_path(csv);
    let summary_file = summary.unwrap_or(&default_summary);
    let stored: Option<Value> = if summary_file.exists() {
        let text = std::fs::read_to_string(summary_file).map_err(|e| CliError::io(summary_file, e))?;
        Some(serde_json::from_str(&text)?)
    } else if summary.is_some() {
        return Err(CliError::Usage(format!("summary {} not found", summary_file.display())));
    } else {
        None
    };

    let mut details = Vec::new();
    let mut violations = 0;
    let mut note = |i: usize, msg: String| {
        violations += 1;
        if details.len() < MAX_DETAILS {
            details.push(format!("row {i}: {msg}"));
        }
    };
    let mut summary_check = None;

    match table.schema_name.as_str() {
        n if n == TRIAL_SCHEMA.name => {
            let records = table
                .rows
                .iter()
                .map(|r| TrialRecord::from_row(r))
                .collect::<CliResult<Vec<_>>>()?;
            let slack = slack
                .or_else(|| stored.as_ref().and_then(|s| s["slack"].as_f64()))
                .unwrap_or(0.0);
            for (i, r) in records.iter().enumerate() {
                if !(r.observed_displacement >= 0.0) {
                    note(i, "negative displacement".into());
                }
                let v = r.violations(slack);
                if !v.is_empty() {
                    note(i, format!("exceeds {}", v.join(", ")));
                }
            }
            if let Some(stored) = &stored {
                let recomputed = serde_json::to_value(summarize(&records, slack))?;
                let mut mismatches = Vec::new();
                let mut max_diff = 0.0;
                compare("", &recomputed, stored, &mut mismatches, &mut max_diff);
                summary_check = Some(SummaryCheck {
                    path: summary_file.display().to_string(),
                    max_diff,
                    mismatches,
                });
            }
        }
        n if n == TIGHTNESS_SCHEMA.name => {
            let (actual, solved, err, ratio) = (
                table.col("actual")?,
                table.col("solved_displacement")?,
                table.col("ratio_error")?,
                table.col("ratio")?,
            );
            for i in 0..table.rows.len() {
                if table.f64_at(i, actual)? != table.f64_at(i, solved)? {
                    note(i, "solved displacement differs from the construction".into());
                }
                if table.f64_at(i, err)? > 4.0 * f64::EPSILON * table.f64_at(i, ratio)? {
                    note(i, "ratio differs from 2n2/(2n2-1)".into());
                }
            }
        }
        n if n == PULL_SCHEMA.name => {
            let (space, grid, rel, abs) = (
                table.col("space")?,
                table.col("grid")?,
                table.col("rel_error_d")?,
                table.col("abs_error")?,
            );
            for i in 0..table.rows.len() {
                let ok = if table.rows[i][space] == "integer" {
                    table.f64_at(i, abs)? <= 1.0
                } else {
                    table.f64_at(i, rel)? <= 2.0 / table.f64_at(i, grid)?
                };
                if !ok {
                    note(i, "pull outside grid resolution".into());
                }
            }
        }
        _ => {}
    }

    let ok = violations == 0 && summary_check.as_ref().is_none_or(|s| s.mismatches.is_empty());
    Ok(ValidationReport {
        schema: format!("{}/v{}", table.schema_name, table.schema_version),
        rows: table.rows.len(),
        violations,
        details,
        summary: summary_check,
        ok,
    })
}
