//! Command-line interface. Every command returns the JSON it prints.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gmedian_core::bounds::{
    breakdown_floor, nonmetric_pull, thm1_bound, thm1_bound_for, thm2_added_bound,
    thm3_replaced_bound, thm4_sod_bound, thm5_weighted_added_bound, thm6_weighted_replaced_bound,
    tightness_example, weighted_breakdown_count, weighted_breakdown_estimate,
};
use gmedian_core::solvers::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use serde_json::{json, Value};

use crate::catalog::{check_dataset, check_space, solve_dataset, MetricOpts, SolveOpts, SpaceName};
use crate::config::{ExperimentConfig, Sweep};
use crate::error::{CliError, CliResult};
use crate::experiments;
use crate::validate::validate;

#[derive(Debug, Parser)]
#[command(name = "gmedian", version, about = "Generalized medians and their robustness bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the generalized median of one dataset file.
    Median(MedianArgs),
    /// Evaluate a bound formula.
    Bounds(BoundsArgs),
    /// Report metric-axiom violations for a named space or a dataset.
    CheckMetric(CheckMetricArgs),
    /// Run an experiment config; writes a CSV and a JSON summary.
    Experiment(ExperimentArgs),
    /// Check soundness of a results CSV and recompute its summary.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct MedianArgs {
    #[arg(long, value_enum)]
    pub space: SpaceName,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Core threshold of the hybrid-integer distance.
    #[arg(long, default_value_t = 2)]
    pub c: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    #[value(name = "1")]
    T1,
    #[value(name = "2")]
    T2,
    #[value(name = "3")]
    T3,
    #[value(name = "4")]
    T4,
    #[value(name = "5")]
    T5,
    #[value(name = "6")]
    T6,
    Breakdown,
    WeightedBreakdown,
    Pull,
    Tightness,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub theorem: TheoremArg,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Ω of the original set (2, 4, 5) or of the survivors (3, 6).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Radius `R` of the original set (1).
    #[arg(long)]
    pub radius: Option<f64>,
    /// Neighbour gap `c` (1).
    #[arg(long, default_value_t = 0.0)]
    pub c: f64,
    /// Weights of the original set (5), the survivors (6) or the set whose
    /// breakdown count is wanted.
    #[arg(long, value_delimiter = ',')]
    pub weights_o: Vec<f64>,
    /// Weights of the added or replaced objects (5, 6).
    #[arg(long, value_delimiter = ',')]
    pub weights_p: Vec<f64>,
    /// Outlier distance (pull, tightness).
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CheckMetricArgs {
    #[arg(long, value_enum)]
    pub space: SpaceName,
    /// Check the objects of this dataset instead of a generated sample.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Ranking length.
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub c: i64,
    /// Power applied to the distance.
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    #[arg(long, default_value_t = 60)]
    pub samples: usize,
    #[arg(long, default_value_t = 100_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Config file (JSON).
    #[arg(conflicts_with = "config_flag")]
    pub config: Option<PathBuf>,
    #[arg(long = "config", id = "config_flag")]
    pub config_flag: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// `5`, `0..50` (inclusive) or `1,2,3`.
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub csv: PathBuf,
    /// Defaults to `<csv stem>.summary.json` when present.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Absolute slack for bound comparisons; defaults to the summary's.
    #[arg(long)]
    pub slack: Option<f64>,
}

/// JSON to print and whether the command succeeded.
pub fn dispatch(cmd: &Command) -> CliResult<(Value, bool)> {
    match cmd {
        Command::Median(a) => median(a).map(|v| (v, true)),
        Command::Bounds(a) => bounds(a).map(|v| (v, true)),
        Command::CheckMetric(a) => check_metric(a).map(|v| (v, true)),
        Command::Experiment(a) => experiment(a).map(|v| (v, true)),
        Command::Validate(a) => {
            let r = validate(&a.csv, a.summary.as_deref(), a.slack)?;
            Ok((serde_json::to_value(&r)?, r.ok))
        }
    }
}

pub fn median(a: &MedianArgs) -> CliResult<Value> {
    solve_dataset(
        a.space,
        &a.input,
        SolveOpts {
            p: a.p,
            tol: a.tol,
            max_iter: a.max_iter,
            c: a.c,
        },
    )
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this theorem")))
}

pub fn bounds(a: &BoundsArgs) -> CliResult<Value> {
    let report = match a.theorem {
        TheoremArg::T1 => {
            let (n, r) = (need(a.n, "n")?, need(a.radius, "radius")?);
            match a.k {
                Some(k) => thm1_bound_for(n, k, r, a.c)?,
                None => thm1_bound(n, r, a.c)?,
            }
        }
        TheoremArg::T2 => thm2_added_bound(need(a.n, "n")?, need(a.k, "k")?, need(a.omega, "omega")?)?,
        TheoremArg::T3 => thm3_replaced_bound(need(a.n, "n")?, need(a.k, "k")?, need(a.omega, "omega")?)?,
        TheoremArg::T4 => thm4_sod_bound(need(a.n, "n")?, need(a.k, "k")?, need(a.omega, "omega")?)?,
        TheoremArg::T5 => thm5_weighted_added_bound(&a.weights_o, &a.weights_p, need(a.omega, "omega")?)?,
        TheoremArg::T6 => {
            thm6_weighted_replaced_bound(&a.weights_o, &a.weights_p, need(a.omega, "omega")?)?
        }
        TheoremArg::Breakdown => {
            let n = need(a.n, "n")?;
            let f = breakdown_floor(n)?;
            return Ok(json!({
                "n": n,
                "count": f.numer(),
                "fraction": format!("{}/{}", f.numer(), f.denom()),
                "value": *f.numer() as f64 / *f.denom() as f64,
            }));
        }
        TheoremArg::WeightedBreakdown => {
            let count = weighted_breakdown_count(&a.weights_o)?;
            let f = weighted_breakdown_estimate(&a.weights_o)?;
            return Ok(json!({
                "n": a.weights_o.len(),
                "count": count,
                "fraction": format!("{}/{}", f.numer(), f.denom()),
                "value": *f.numer() as f64 / *f.denom() as f64,
            }));
        }
        TheoremArg::Pull => {
            let (d, n, p) = (need(a.d, "d")?, need(a.n, "n")?, need(a.p, "p")?);
            return Ok(json!({ "d": d, "n": n, "p": p, "pull": nonmetric_pull(d, n, p)? }));
        }
        TheoremArg::Tightness => {
            let n2 = need(a.n2, "n2")?;
            let n1 = a.n1.unwrap_or(n2 + 1);
            let k = n1.checked_sub(n2).ok_or_else(|| CliError::Usage("needs n1 > n2".into()))? + 1;
            let ex = tightness_example(n1, n2, k, a.d.unwrap_or(1.0))?;
            return Ok(json!({
                "n1": ex.n1,
                "n2": ex.n2,
                "k": ex.k,
                "d": ex.d,
                "bound": ex.bound,
                "actual": ex.actual,
                "ratio": format!("{}/{}", ex.ratio.numer(), ex.ratio.denom()),
            }));
        }
    };
    Ok(serde_json::to_value(&report)?)
}

pub fn check_metric(a: &CheckMetricArgs) -> CliResult<Value> {
    let o = MetricOpts {
        m: a.m,
        c: a.c,
        p: a.p,
        samples: a.samples,
        budget: a.budget,
        tol: a.tol,
        seed: a.seed,
    };
    let row = match &a.input {
        Some(path) => check_dataset(a.space, path, &o)?,
        None => check_space(a.space, &o)?,
    };
    Ok(serde_json::to_value(&row)?)
}

pub fn experiment(a: &ExperimentArgs) -> CliResult<Value> {
    let path = a
        .config
        .as_ref()
        .or(a.config_flag.as_ref())
        .ok_or_else(|| CliError::Usage("experiment needs a config file".into()))?;
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(t) = a.trials {
        cfg.trials = Some(t);
    }
    if let Some(k) = &a.k {
        cfg.k = Some(Sweep::parse(k)?);
    }
    if let Some(o) = &a.out {
        cfg.output = Some(o.clone());
    }
    if let Some(t) = a.threads {
        cfg.threads = Some(t);
    }
    let resolved = cfg.resolve()?;
    let out = experiments::run(&resolved)?;
    out.write(&resolved)?;
    Ok(json!({
        "experiment": resolved.kind.label(),
        "output": resolved.output,
        "summary": resolved.summary_path(),
        "violations": out.summary.get("violations").cloned().unwrap_or(Value::Null),
    }))
}
