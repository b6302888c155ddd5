//! Experiment runners. Each produces CSV bytes and a JSON summary; writing
//! them is left to the caller so the outputs can be compared in memory.

use gmedian_core::bounds::{nonmetric_pull, tightness_example};
use gmedian_core::solvers::{nonmetric_pull_empirical, real_line_median};
use gmedian_core::spaces::{Integers, RealLine};
use gmedian_core::WeightedSet;
use serde_json::{json, Value};

use crate::catalog::{check_space, solve_dataset, MetricOpts, SolveOpts, SpaceName};
use crate::config::{ExperimentKind, Resolved};
use crate::error::{CliError, CliResult};
use crate::kits::{RankingKit, RealKit, RotationKit};
use crate::table::{fmt_f64, render_csv, write_file, write_json, Schema};
use crate::trials::{run_trials, summarize, Kit, TRIAL_SCHEMA};

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub csv: Vec<u8>,
    pub summary: Value,
}

impl RunOutput {
    /// Writes the CSV to `cfg.output` and the summary next to it.
    pub fn write(&self, cfg: &Resolved) -> CliResult<()> {
        write_file(&cfg.output, &self.csv)?;
        write_json(&cfg.summary_path(), &self.summary)
    }
}

pub fn run(cfg: &Resolved) -> CliResult<RunOutput> {
    match cfg.kind {
        ExperimentKind::BoundsReals => trials(cfg, &RealKit::from_config(cfg)),
        ExperimentKind::Rotations => trials(cfg, &RotationKit::from_config(cfg)),
        ExperimentKind::Rankings => trials(cfg, &RankingKit::from_config(cfg)?),
        ExperimentKind::Tightness => tightness(cfg),
        ExperimentKind::NonmetricPull => pull(cfg),
        ExperimentKind::CheckMetric => check_metric(cfg),
        ExperimentKind::Median => median(cfg),
    }
}

fn header(cfg: &Resolved, schema: &Schema) -> Value {
    json!({
        "experiment": cfg.kind.label(),
        "seed": cfg.seed,
        "schema": format!("{}/v{}", schema.name, schema.version),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn trials<K: Kit>(cfg: &Resolved, kit: &K) -> CliResult<RunOutput> {
    let records = run_trials(kit, cfg)?;
    let rows: Vec<Vec<String>> = records.iter().map(|r| r.to_row()).collect();
    let summary = summarize(&records, kit.slack());
    Ok(RunOutput {
        csv: render_csv(&TRIAL_SCHEMA, &rows)?,
        summary: merge(header(cfg, &TRIAL_SCHEMA), serde_json::to_value(&summary)?),
    })
}

pub const TIGHTNESS_SCHEMA: Schema = Schema {
    name: "tightness",
    version: 1,
    columns: &[
        "n2",
        "n1",
        "k",
        "d",
        "bound",
        "actual",
        "solved_displacement",
        "ratio",
        "ratio_exact",
        "ratio_error",
    ],
};

fn tightness(cfg: &Resolved) -> CliResult<RunOutput> {
    let mut rows = Vec::new();
    let mut max_error = 0.0f64;
    let mut solved_ok = true;
    for &n2 in &cfg.n2_values {
        for &d in &cfg.d_values {
            let n1 = n2 + cfg.n1_offset;
            let ex = tightness_example(n1, n2, n1 - n2 + 1, d)?;
            let o = WeightedSet::uniform(ex.original.clone())?;
            let mut q_objs = ex.original.clone();
            q_objs.extend(&ex.outliers);
            let q = WeightedSet::uniform(q_objs)?;
            let solved = (real_line_median(&q)?.median - real_line_median(&o)?.median).abs();
            solved_ok &= solved == ex.actual;
            let ratio = ex.bound / ex.actual;
            let exact = *ex.ratio.numer() as f64 / *ex.ratio.denom() as f64;
            let err = (ratio - exact).abs();
            max_error = max_error.max(err);
            rows.push(vec![
                n2.to_string(),
                n1.to_string(),
                ex.k.to_string(),
                fmt_f64(d),
                fmt_f64(ex.bound),
                fmt_f64(ex.actual),
                fmt_f64(solved),
                fmt_f64(ratio),
                format!("{}/{}", ex.ratio.numer(), ex.ratio.denom()),
                fmt_f64(err),
            ]);
        }
    }
    let extra = json!({
        "rows": rows.len(),
        "max_ratio_error": max_error,
        "solved_equals_actual": solved_ok,
    });
    Ok(RunOutput {
        csv: render_csv(&TIGHTNESS_SCHEMA, &rows)?,
        summary: merge(header(cfg, &TIGHTNESS_SCHEMA), extra),
    })
}

pub const PULL_SCHEMA: Schema = Schema {
    name: "nonmetric_pull",
    version: 1,
    columns: &[
        "space",
        "p",
        "n",
        "d",
        "grid",
        "predicted",
        "empirical",
        "abs_error",
        "rel_error_d",
        "pull_over_d",
    ],
};

/// Reals use the configured grid. Integers scan every lattice point between
/// the inlier and the outlier, so they run only for integral `d ≥ 10`.
fn pull(cfg: &Resolved) -> CliResult<RunOutput> {
    let mut rows = Vec::new();
    let mut max_rel_real = 0.0f64;
    let mut max_abs_int = 0.0f64;
    for &p in &cfg.p_values {
        for &n in &cfg.n_values {
            for &d in &cfg.d_values {
                let predicted = nonmetric_pull(d, n, p)?;
                let mut push = |space: &str, grid: usize, empirical: f64| {
                    let abs = (empirical - predicted).abs();
                    rows.push(vec![
                        space.to_string(),
                        p.to_string(),
                        n.to_string(),
                        fmt_f64(d),
                        grid.to_string(),
                        fmt_f64(predicted),
                        fmt_f64(empirical),
                        fmt_f64(abs),
                        fmt_f64(abs / d),
                        fmt_f64(empirical / d),
                    ]);
                    abs
                };
                let e = nonmetric_pull_empirical(&RealLine, &0.0, &d, n, p, cfg.grid)?;
                max_rel_real = max_rel_real.max(push("real", cfg.grid, e) / d);
                if d.fract() == 0.0 && (10.0..=1e7).contains(&d) {
                    let di = d as i64;
                    let e = nonmetric_pull_empirical(&Integers::new(0, di)?, &0, &di, n, p, di as usize)?;
                    max_abs_int = max_abs_int.max(push("integer", di as usize, e));
                }
            }
        }
    }
    let extra = json!({
        "rows": rows.len(),
        "max_rel_error_real": max_rel_real,
        "grid": cfg.grid,
        "max_abs_error_integer": max_abs_int,
    });
    Ok(RunOutput {
        csv: render_csv(&PULL_SCHEMA, &rows)?,
        summary: merge(header(cfg, &PULL_SCHEMA), extra),
    })
}

pub const METRIC_SCHEMA: Schema = Schema {
    name: "check_metric",
    version: 1,
    columns: &[
        "space",
        "p",
        "metric_claim",
        "sample_size",
        "exhaustive",
        "triples_sampled",
        "pairs_checked",
        "symmetry_violations",
        "identity_violations",
        "positivity_violations",
        "triangle_violations",
        "worst_triangle_margin",
        "witness_objects",
        "clean",
    ],
};

fn check_metric(cfg: &Resolved) -> CliResult<RunOutput> {
    let opts = MetricOpts {
        m: cfg.ranking_len.min(4),
        p: cfg.p_values.first().copied().unwrap_or(1),
        samples: cfg.samples,
        budget: cfg.budget,
        seed: cfg.seed,
        ..MetricOpts::default()
    };
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for name in &cfg.spaces {
        let r = check_space(SpaceName::parse(name)?, &opts)?;
        rows.push(vec![
            r.space.to_string(),
            r.p.to_string(),
            r.metric_claim.to_string(),
            r.sample_size.to_string(),
            r.report.exhaustive.to_string(),
            r.report.triples_sampled.to_string(),
            r.report.pairs_checked.to_string(),
            r.report.symmetry_violations.to_string(),
            r.report.identity_violations.to_string(),
            r.report.positivity_violations.to_string(),
            r.report.triangle_violations.to_string(),
            r.report.worst_triangle.map_or(String::new(), |w| fmt_f64(w.margin)),
            r.witness_objects.clone().unwrap_or_default(),
            r.clean.to_string(),
        ]);
        reports.push(r);
    }
    Ok(RunOutput {
        csv: render_csv(&METRIC_SCHEMA, &rows)?,
        summary: merge(header(cfg, &METRIC_SCHEMA), json!({ "reports": reports })),
    })
}

pub const MEDIAN_SCHEMA: Schema = Schema {
    name: "median",
    version: 1,
    columns: &["space", "p", "n", "median", "omega", "iterations", "converged", "solver"],
};

fn median(cfg: &Resolved) -> CliResult<RunOutput> {
    let input = cfg.input.as_ref().expect("validated");
    let space = SpaceName::parse(&cfg.space)?;
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for &p in &cfg.p_values {
        let v = solve_dataset(
            space,
            input,
            SolveOpts {
                p,
                tol: cfg.tol,
                max_iter: cfg.max_iter,
                c: 2,
            },
        )?;
        let cell = |k: &str| -> CliResult<String> {
            match &v[k] {
                Value::String(s) => Ok(s.clone()),
                Value::Null => Err(CliError::Usage(format!("solver returned no {k}"))),
                other => Ok(other.to_string()),
            }
        };
        rows.push(
            ["space", "p", "n", "median", "omega", "iterations", "converged", "solver"]
                .iter()
                .map(|k| cell(k))
                .collect::<CliResult<Vec<_>>>()?,
        );
        results.push(v);
    }
    Ok(RunOutput {
        csv: render_csv(&MEDIAN_SCHEMA, &rows)?,
        summary: merge(header(cfg, &MEDIAN_SCHEMA), json!({ "results": results })),
    })
}
