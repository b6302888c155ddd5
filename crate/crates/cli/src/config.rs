//! Experiment configuration files.
//!
//! A config is a flat JSON object. `experiment` and `seed` are required;
//! every other field has a per-experiment default (see [`Resolved`]).
//! Unknown fields are rejected.

use std::path::{Path, PathBuf};

use gmedian_core::corruption::CorruptionMode;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    BoundsReals,
    Rotations,
    Rankings,
    Tightness,
    NonmetricPull,
    CheckMetric,
    Median,
}

impl ExperimentKind {
    pub fn label(self) -> &'static str {
        match self {
            ExperimentKind::BoundsReals => "bounds_reals",
            ExperimentKind::Rotations => "rotations",
            ExperimentKind::Rankings => "rankings",
            ExperimentKind::Tightness => "tightness",
            ExperimentKind::NonmetricPull => "nonmetric_pull",
            ExperimentKind::CheckMetric => "check_metric",
            ExperimentKind::Median => "median",
        }
    }
}

/// An integer sweep: `5`, `[0, 2, 4]` or `{"from": 0, "to": 50, "step": 1}`
/// (inclusive).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweep {
    One(usize),
    List(Vec<usize>),
    Range {
        from: usize,
        to: usize,
        #[serde(default = "one")]
        step: usize,
    },
}

fn one() -> usize {
    1
}

impl Sweep {
    pub fn values(&self) -> CliResult<Vec<usize>> {
        let v = match self {
            Sweep::One(k) => vec![*k],
            Sweep::List(v) => v.clone(),
            Sweep::Range { from, to, step } => {
                if *step == 0 {
                    return Err(CliError::Config("range step must be >= 1".into()));
                }
                if from > to {
                    return Err(CliError::Config(format!("empty range {from}..={to}")));
                }
                (*from..=*to).step_by(*step).collect()
            }
        };
        if v.is_empty() {
            return Err(CliError::Config("sweep must not be empty".into()));
        }
        Ok(v)
    }

    /// Parses `5`, `0..50` (inclusive) or `1,2,3`.
    pub fn parse(s: &str) -> CliResult<Self> {
        let bad = || CliError::Usage(format!("cannot parse k specification {s:?}"));
        if let Some((a, b)) = s.split_once("..") {
            let from = a.trim().parse().map_err(|_| bad())?;
            let to = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            return Ok(Sweep::Range { from, to, step: 1 });
        }
        if s.contains(',') {
            let v = s
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| bad()))
                .collect::<CliResult<Vec<usize>>>()?;
            return Ok(Sweep::List(v));
        }
        s.trim().parse().map(Sweep::One).map_err(|_| bad())
    }
}

/// A scalar or a list of scalars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// How per-object weights of the generated data are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSpec {
    Unit,
    /// Integers drawn uniformly from `[lo, hi]`.
    UniformInt([u32; 2]),
    /// Reals drawn uniformly from `[lo, hi)`.
    Uniform([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub trials: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<Sweep>,
    pub mode: Option<CorruptionMode>,
    /// Noise scale: standard deviation on ℝ, angle σ (radians) on SO(3).
    pub sigma: Option<f64>,
    /// Outlier position on ℝ (may be swept).
    pub outlier_distance: Option<OneOrMany<f64>>,
    /// Separation between inlier and outlier base rotations (radians).
    pub outlier_angle: Option<f64>,
    pub ranking_len: Option<usize>,
    pub swap_count: Option<usize>,
    pub outlier_swap_count: Option<usize>,
    pub weights: Option<WeightSpec>,
    /// Weight of every added outlier.
    pub outlier_weight: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub p: Option<OneOrMany<u32>>,
    pub n2: Option<Sweep>,
    /// `n1 = n2 + n1_offset`.
    pub n1_offset: Option<usize>,
    pub d: Option<OneOrMany<f64>>,
    pub n_values: Option<Sweep>,
    pub grid: Option<usize>,
    pub space: Option<String>,
    pub spaces: Option<Vec<String>>,
    pub samples: Option<usize>,
    pub budget: Option<u64>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    /// Worker threads; `1` runs serially. Results do not depend on it.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::from_json(&text)?;
        // Relative input paths are resolved against the config's directory.
        if let (Some(input), Some(dir)) = (&cfg.input, path.parent()) {
            if input.is_relative() {
                cfg.input = Some(dir.join(input));
            }
        }
        Ok(cfg)
    }

    /// Fills every missing field with the experiment's default and
    /// validates the result.
    pub fn resolve(&self) -> CliResult<Resolved> {
        use ExperimentKind::*;
        let kind = self.experiment;
        let (n, k, trials, sigma) = match kind {
            BoundsReals => (101, Sweep::Range { from: 0, to: 50, step: 1 }, 100, 5.0),
            Rotations => (21, Sweep::Range { from: 0, to: 10, step: 1 }, 20, 0.2),
            Rankings => (21, Sweep::Range { from: 0, to: 10, step: 1 }, 20, 0.0),
            _ => (0, Sweep::One(0), 1, 0.0),
        };
        let swap_count = self.swap_count.unwrap_or(1);
        let r = Resolved {
            kind,
            seed: self.seed,
            trials: self.trials.unwrap_or(trials),
            n: self.n.unwrap_or(n),
            ks: self.k.clone().unwrap_or(k).values()?,
            mode: self.mode.unwrap_or(CorruptionMode::Replace),
            sigma: self.sigma.unwrap_or(sigma),
            outlier_distances: self
                .outlier_distance
                .as_ref()
                .map(|d| d.to_vec())
                .unwrap_or_else(|| vec![1000.0]),
            outlier_angle: self.outlier_angle,
            ranking_len: self.ranking_len.unwrap_or(7),
            swap_count,
            outlier_swap_count: self.outlier_swap_count.unwrap_or(10),
            weights: self.weights.clone().unwrap_or(WeightSpec::Unit),
            outlier_weight: self.outlier_weight.unwrap_or(1.0),
            tol: self.tol.unwrap_or(match kind {
                Rotations => gmedian_core::solvers::DEFAULT_SO3_TOL,
                _ => gmedian_core::solvers::DEFAULT_TOL,
            }),
            max_iter: self.max_iter.unwrap_or(gmedian_core::solvers::DEFAULT_MAX_ITER),
            p_values: self.p.as_ref().map(|p| p.to_vec()).unwrap_or_else(|| match kind {
                NonmetricPull => vec![2, 3, 4],
                _ => vec![1],
            }),
            n2_values: self
                .n2
                .clone()
                .unwrap_or(Sweep::Range { from: 1, to: 100, step: 1 })
                .values()?,
            n1_offset: self.n1_offset.unwrap_or(1),
            d_values: self.d.as_ref().map(|d| d.to_vec()).unwrap_or_else(|| match kind {
                NonmetricPull => vec![1.0, 1e3, 1e6],
                _ => vec![1.0],
            }),
            n_values: self
                .n_values
                .clone()
                .unwrap_or(Sweep::List(vec![2, 5, 10]))
                .values()?,
            grid: self.grid.unwrap_or(1000),
            space: self.space.clone().unwrap_or_else(|| "real".into()),
            spaces: self.spaces.clone().unwrap_or_else(|| {
                ["ranking", "real", "rotation", "integer", "hybrid-integer", "squared-real"]
                    .map(String::from)
                    .to_vec()
            }),
            samples: self.samples.unwrap_or(60),
            budget: self.budget.unwrap_or(100_000),
            input: self.input.clone(),
            output: self
                .output
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("{}.csv", kind.label()))),
            threads: self.threads,
        };
        r.validate()?;
        Ok(r)
    }
}

/// A config with all defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub trials: usize,
    pub n: usize,
    pub ks: Vec<usize>,
    pub mode: CorruptionMode,
    pub sigma: f64,
    pub outlier_distances: Vec<f64>,
    pub outlier_angle: Option<f64>,
    pub ranking_len: usize,
    pub swap_count: usize,
    pub outlier_swap_count: usize,
    pub weights: WeightSpec,
    pub outlier_weight: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub p_values: Vec<u32>,
    pub n2_values: Vec<usize>,
    pub n1_offset: usize,
    pub d_values: Vec<f64>,
    pub n_values: Vec<usize>,
    pub grid: usize,
    pub space: String,
    pub spaces: Vec<String>,
    pub samples: usize,
    pub budget: u64,
    pub input: Option<PathBuf>,
    pub output: PathBuf,
    pub threads: Option<usize>,
}

impl Resolved {
    fn validate(&self) -> CliResult<()> {
        use ExperimentKind::*;
        let err = |m: String| Err(CliError::Config(m));
        if self.trials == 0 {
            return err("trials must be >= 1".into());
        }
        if self.threads == Some(0) {
            return err("threads must be >= 1".into());
        }
        if matches!(self.kind, BoundsReals | Rotations | Rankings) {
            if self.n == 0 {
                return err("n must be >= 1".into());
            }
            if self.mode == CorruptionMode::Replace {
                if let Some(k) = self.ks.iter().find(|&&k| k > self.n) {
                    return err(format!("cannot replace k = {k} of n = {} objects", self.n));
                }
            }
            if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
                return err(format!("sigma must be finite and >= 0, got {}", self.sigma));
            }
            if !(self.outlier_weight > 0.0 && self.outlier_weight.is_finite()) {
                return err("outlier_weight must be > 0".into());
            }
            if !(self.tol > 0.0) {
                return err("tol must be > 0".into());
            }
        }
        match self.kind {
            BoundsReals if self.outlier_distances.iter().any(|d| !d.is_finite()) => {
                err("outlier_distance must be finite".into())
            }
            Rankings if !(2..=8).contains(&self.ranking_len) => err(format!(
                "ranking_len must lie in 2..=8, got {}",
                self.ranking_len
            )),
            Tightness if self.n1_offset == 0 => err("n1_offset must be >= 1 (n1 > n2)".into()),
            Tightness if self.n2_values.contains(&0) => err("n2 must be >= 1".into()),
            NonmetricPull if self.grid < 10 => err("grid must be >= 10".into()),
            Median if self.input.is_none() => err("median experiment needs an input file".into()),
            _ => Ok(()),
        }
    }

    pub fn summary_path(&self) -> PathBuf {
        summary_path(&self.output)
    }
}

/// `results/x.csv` → `results/x.summary.json`.
pub fn summary_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().and_then(|s| s.to_str()).unwrap_or("results");
    csv.with_file_name(format!("{stem}.summary.json"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = ExperimentConfig::from_json(r#"{"experiment": "bounds_reals", "seed": 1}"#).unwrap();
        let r = c.resolve().unwrap();
        assert_eq!((r.n, r.trials, r.ks.len(), r.sigma), (101, 100, 51, 5.0));
        assert_eq!(r.output, PathBuf::from("bounds_reals.csv"));
        assert_eq!(r.summary_path(), PathBuf::from("bounds_reals.summary.json"));
    }

    #[test]
    fn sweeps() {
        assert_eq!(Sweep::parse("0..4").unwrap().values().unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(Sweep::parse("0..=2").unwrap().values().unwrap(), vec![0, 1, 2]);
        assert_eq!(Sweep::parse("3,1").unwrap().values().unwrap(), vec![3, 1]);
        assert_eq!(Sweep::parse("7").unwrap().values().unwrap(), vec![7]);
        assert!(Sweep::parse("x").is_err());
        let r: Sweep = serde_json::from_str(r#"{"from": 0, "to": 10, "step": 5}"#).unwrap();
        assert_eq!(r.values().unwrap(), vec![0, 5, 10]);
    }

    #[test]
    fn rejects_unknown_fields_and_missing_seed() {
        assert!(ExperimentConfig::from_json(r#"{"experiment": "rankings", "seed": 1, "bogus": 2}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"experiment": "rankings"}"#).is_err());
    }

    #[test]
    fn validation() {
        let bad = [
            r#"{"experiment": "bounds_reals", "seed": 1, "trials": 0}"#,
            r#"{"experiment": "bounds_reals", "seed": 1, "n": 5, "k": 6}"#,
            r#"{"experiment": "rankings", "seed": 1, "ranking_len": 9}"#,
            r#"{"experiment": "median", "seed": 1}"#,
            r#"{"experiment": "tightness", "seed": 1, "n1_offset": 0}"#,
        ];
        for b in bad {
            let c = ExperimentConfig::from_json(b).unwrap();
            assert!(matches!(c.resolve(), Err(CliError::Config(_))), "{b}");
        }
    }

    #[test]
    fn weight_specs() {
        let c: ExperimentConfig = serde_json::from_str(
            r#"{"experiment": "rankings", "seed": 1, "weights": {"uniform_int": [1, 3]}}"#,
        )
        .unwrap();
        assert_eq!(c.weights, Some(WeightSpec::UniformInt([1, 3])));
    }
}
