//! Randomized corruption trials shared by the reals, rotations and rankings
//! experiments.
//!
//! For trial `t` the data set is generated from `derive_seed(seed, [t, DATA])`
//! and reused for every `k`, so rows of one trial differ only in the
//! corruption. The corruption stream is `derive_seed(seed, [t, k, OUTLIERS])`;
//! it does not depend on the outlier distance, so a distance sweep replaces
//! the same indices.

use std::fmt::Debug;

use gmedian_core::bounds::{
    thm1_bound_for, thm2_added_bound, thm3_replaced_bound, thm4_sod_bound,
    thm5_weighted_added_bound, thm6_weighted_replaced_bound,
};
use gmedian_core::corruption::{CorruptionMode, CorruptionPlan};
use gmedian_core::rng::{derive_seed, purpose, rng_from_seed};
use gmedian_core::{MedianResult, WeightedSet};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Resolved, WeightSpec};
use crate::error::{CliError, CliResult};
use crate::table::{fmt_bound, fmt_f64, parse_bound, Schema, Stats};

pub const TRIAL_SCHEMA: Schema = Schema {
    name: "trials",
    version: 1,
    columns: &[
        "trial_index",
        "k",
        "mode",
        "outlier_distance",
        "observed_displacement",
        "mean_displacement",
        "bound_thm1",
        "bound_thm2",
        "bound_thm3",
        "bound_thm4",
        "bound_thm5",
        "bound_thm6",
        "sod_gap",
        "omega_original",
        "omega_corrupted",
        "solver_converged",
        "seed_derivation",
    ],
};

/// Space-specific pieces of a trial.
pub trait Kit: Sync {
    type Obj: Clone + PartialEq + Debug + Send + Sync + 'static;

    /// Neighbour gap `c` of the first bound.
    fn gap(&self) -> f64;

    /// Absolute slack when comparing displacements with bounds; non-zero
    /// only for iterative solvers.
    fn slack(&self) -> f64 {
        0.0
    }

    fn generate(&self, n: usize, data_seed: u64) -> CliResult<Vec<Self::Obj>>;

    /// `k` outliers; `distance` is the configured outlier distance.
    fn outliers(&self, k: usize, data_seed: u64, seed: u64, distance: f64)
        -> CliResult<Vec<Self::Obj>>;

    fn distance(&self, a: &Self::Obj, b: &Self::Obj) -> f64;

    fn median(&self, set: &WeightedSet<Self::Obj>) -> CliResult<MedianResult<Self::Obj>>;

    fn mean(&self, set: &WeightedSet<Self::Obj>) -> CliResult<MedianResult<Self::Obj>>;

    /// Values written to the `outlier_distance` column; one row group each.
    fn outlier_distances(&self) -> Vec<f64>;
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub k: usize,
    pub mode: CorruptionMode,
    pub outlier_distance: f64,
    pub observed_displacement: f64,
    pub mean_displacement: f64,
    pub bound_thm1: Option<f64>,
    pub bound_thm2: Option<f64>,
    pub bound_thm3: Option<f64>,
    pub bound_thm4: Option<f64>,
    pub bound_thm5: Option<f64>,
    pub bound_thm6: Option<f64>,
    pub sod_gap: f64,
    pub omega_original: f64,
    pub omega_corrupted: f64,
    pub solver_converged: bool,
    pub seed_derivation: String,
}

impl TrialRecord {
    pub fn to_row(&self) -> Vec<String> {
        vec![
            self.trial_index.to_string(),
            self.k.to_string(),
            self.mode.label().to_string(),
            fmt_f64(self.outlier_distance),
            fmt_f64(self.observed_displacement),
            fmt_f64(self.mean_displacement),
            fmt_bound(self.bound_thm1),
            fmt_bound(self.bound_thm2),
            fmt_bound(self.bound_thm3),
            fmt_bound(self.bound_thm4),
            fmt_bound(self.bound_thm5),
            fmt_bound(self.bound_thm6),
            fmt_f64(self.sod_gap),
            fmt_f64(self.omega_original),
            fmt_f64(self.omega_corrupted),
            self.solver_converged.to_string(),
            self.seed_derivation.clone(),
        ]
    }

    /// Inverse of [`TrialRecord::to_row`].
    pub fn from_row(row: &[String]) -> CliResult<Self> {
        if row.len() != TRIAL_SCHEMA.columns.len() {
            return Err(CliError::Usage(format!("trial row has {} cells", row.len())));
        }
        let num = |i: usize| -> CliResult<f64> {
            row[i]
                .parse()
                .map_err(|_| CliError::Usage(format!("bad number {:?} in column {}", row[i], TRIAL_SCHEMA.columns[i])))
        };
        let int = |i: usize| -> CliResult<usize> {
            row[i]
                .parse()
                .map_err(|_| CliError::Usage(format!("bad integer {:?} in column {}", row[i], TRIAL_SCHEMA.columns[i])))
        };
        let mode: CorruptionMode = serde_json::from_value(serde_json::Value::String(row[2].clone()))
            .map_err(|_| CliError::Usage(format!("bad mode {:?}", row[2])))?;
        Ok(Self {
            trial_index: int(0)?,
            k: int(1)?,
            mode,
            outlier_distance: num(3)?,
            observed_displacement: num(4)?,
            mean_displacement: num(5)?,
            bound_thm1: parse_bound(&row[6])?,
            bound_thm2: parse_bound(&row[7])?,
            bound_thm3: parse_bound(&row[8])?,
            bound_thm4: parse_bound(&row[9])?,
            bound_thm5: parse_bound(&row[10])?,
            bound_thm6: parse_bound(&row[11])?,
            sod_gap: num(12)?,
            omega_original: num(13)?,
            omega_corrupted: num(14)?,
            solver_converged: row[15]
                .parse()
                .map_err(|_| CliError::Usage(format!("bad flag {:?}", row[15])))?,
            seed_derivation: row[16].clone(),
        })
    }

    /// Names of the bounds this row violates, given an absolute slack.
    pub fn violations(&self, slack: f64) -> Vec<&'static str> {
        let over = |value: f64, bound: Option<f64>| {
            bound.is_some_and(|b| value > b + slack + 1e-12 * b.abs())
        };
        let mut v = Vec::new();
        for (name, b) in [
            ("thm1", self.bound_thm1),
            ("thm2", self.bound_thm2),
            ("thm3", self.bound_thm3),
            ("thm5", self.bound_thm5),
            ("thm6", self.bound_thm6),
        ] {
            if over(self.observed_displacement, b) {
                v.push(name);
            }
        }
        if over(self.sod_gap, self.bound_thm4) {
            v.push("thm4");
        }
        v
    }
}

pub fn draw_weights(spec: &WeightSpec, n: usize, seed: u64) -> CliResult<Vec<f64>> {
    let mut rng = rng_from_seed(seed);
    match *spec {
        WeightSpec::Unit => Ok(vec![1.0; n]),
        WeightSpec::UniformInt([lo, hi]) => {
            if lo == 0 || lo > hi {
                return Err(CliError::Config(format!("bad integer weight range [{lo}, {hi}]")));
            }
            Ok((0..n).map(|_| rng.random_range(lo..=hi) as f64).collect())
        }
        WeightSpec::Uniform([lo, hi]) => {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return Err(CliError::Config(format!("bad weight range [{lo}, {hi})")));
            }
            Ok((0..n).map(|_| rng.random_range(lo..hi)).collect())
        }
    }
}

/// Runs `f` on a pool of `threads` workers, or on rayon's global pool.
pub fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn all_converged<T>(rs: &[&MedianResult<T>]) -> bool {
    rs.iter().all(|r| r.converged)
}

fn run_trial<K: Kit>(kit: &K, cfg: &Resolved, t: usize) -> CliResult<Vec<TrialRecord>> {
    let n = cfg.n;
    let data_seed = derive_seed(cfg.seed, &[t as u64, purpose::DATA]);
    let objs = kit.generate(n, data_seed)?;
    let weights = draw_weights(&cfg.weights, n, derive_seed(cfg.seed, &[t as u64, purpose::WEIGHTS]))?;
    let unit_data = cfg.weights == WeightSpec::Unit;
    let o_set = WeightedSet::new(objs, weights)?;
    let o_med = kit.median(&o_set)?;
    let o_mean = kit.mean(&o_set)?;
    let radius = o_set
        .objects()
        .iter()
        .map(|o| kit.distance(&o_med.median, o))
        .fold(0.0, f64::max);

    let distances = kit.outlier_distances();
    let mut out = Vec::with_capacity(cfg.ks.len() * distances.len());
    for &k in &cfg.ks {
        for &dist in &distances {
            let seed = derive_seed(cfg.seed, &[t as u64, k as u64, purpose::OUTLIERS]);
            let outliers = kit.outliers(k, data_seed, seed, dist)?;
            let plan = match cfg.mode {
                CorruptionMode::Add => {
                    CorruptionPlan::add_weighted(outliers, vec![cfg.outlier_weight; k], seed)?
                }
                CorruptionMode::Replace => CorruptionPlan::replace(n, outliers, seed)?,
            };
            let q = plan.apply(&o_set)?;
            let q_med = kit.median(&q.set)?;
            let q_mean = kit.mean(&q.set)?;
            let omega_q_at_o: f64 = q
                .set
                .iter()
                .map(|(x, w)| w * kit.distance(&o_med.median, x))
                .sum();

            let mut rec = TrialRecord {
                trial_index: t,
                k,
                mode: cfg.mode,
                outlier_distance: dist,
                observed_displacement: kit.distance(&o_med.median, &q_med.median),
                mean_displacement: kit.distance(&o_mean.median, &q_mean.median),
                bound_thm1: None,
                bound_thm2: None,
                bound_thm3: None,
                bound_thm4: None,
                bound_thm5: None,
                bound_thm6: None,
                sod_gap: omega_q_at_o - q_med.omega,
                omega_original: o_med.omega,
                omega_corrupted: q_med.omega,
                solver_converged: all_converged(&[&o_med, &q_med, &o_mean, &q_mean]),
                seed_derivation: format!(
                    "data={}:{t}:{};corruption={}:{t}:{k}:{}",
                    cfg.seed,
                    purpose::DATA,
                    cfg.seed,
                    purpose::OUTLIERS
                ),
            };

            match cfg.mode {
                CorruptionMode::Replace => {
                    if unit_data {
                        rec.bound_thm1 = thm1_bound_for(n, k, radius, kit.gap())?.finite();
                    }
                    if let Some(x) = q.survivor_set() {
                        let x_med = kit.median(&x)?;
                        rec.solver_converged &= x_med.converged;
                        if unit_data {
                            rec.bound_thm3 = thm3_replaced_bound(n, k, x_med.omega)?.finite();
                        }
                        rec.bound_thm6 = thm6_weighted_replaced_bound(
                            x.weights(),
                            &plan.corrupted_weights(&o_set),
                            x_med.omega,
                        )?
                        .finite();
                    }
                }
                CorruptionMode::Add => {
                    if unit_data && cfg.outlier_weight == 1.0 {
                        rec.bound_thm2 = thm2_added_bound(n, k, o_med.omega)?.finite();
                        rec.bound_thm4 = thm4_sod_bound(n, k, o_med.omega)?.finite();
                    }
                    rec.bound_thm5 = thm5_weighted_added_bound(
                        o_set.weights(),
                        &plan.corrupted_weights(&o_set),
                        o_med.omega,
                    )?
                    .finite();
                }
            }
            out.push(rec);
        }
    }
    Ok(out)
}

/// All trials, in `(trial, k, distance)` order regardless of scheduling.
pub fn run_trials<K: Kit>(kit: &K, cfg: &Resolved) -> CliResult<Vec<TrialRecord>> {
    let per_trial = in_pool(cfg.threads, || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(kit, cfg, t))
            .collect::<CliResult<Vec<_>>>()
    })??;
    Ok(per_trial.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub k: usize,
    pub outlier_distance: f64,
    pub trials: usize,
    pub observed_displacement: Option<Stats>,
    pub mean_displacement: Option<Stats>,
    pub sod_gap: Option<Stats>,
    pub bound_thm1: Option<Stats>,
    pub bound_thm2: Option<Stats>,
    pub bound_thm3: Option<Stats>,
    pub bound_thm4: Option<Stats>,
    pub bound_thm5: Option<Stats>,
    pub bound_thm6: Option<Stats>,
    pub zero_displacement_fraction: f64,
    pub converged_fraction: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub schema: String,
    pub rows: usize,
    pub slack: f64,
    pub violations: usize,
    pub violations_by_bound: std::collections::BTreeMap<&'static str, usize>,
    pub unconverged_rows: usize,
    pub groups: Vec<GroupSummary>,
}

/// Per-`(k, outlier_distance)` statistics, groups in first-appearance order.
pub fn summarize(records: &[TrialRecord], slack: f64) -> TrialSummary {
    let mut keys: Vec<(usize, u64)> = Vec::new();
    for r in records {
        let key = (r.k, r.outlier_distance.to_bits());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    let mut by_bound = std::collections::BTreeMap::new();
    let mut total = 0;
    for r in records {
        let v = r.violations(slack);
        if !v.is_empty() {
            total += 1;
        }
        for name in v {
            *by_bound.entry(name).or_insert(0) += 1;
        }
    }
    let groups = keys
        .into_iter()
        .map(|(k, bits)| {
            let rows: Vec<&TrialRecord> = records
                .iter()
                .filter(|r| r.k == k && r.outlier_distance.to_bits() == bits)
                .collect();
            let col = |f: &dyn Fn(&TrialRecord) -> f64| {
                Stats::of(&rows.iter().map(|r| f(r)).collect::<Vec<_>>())
            };
            let bound = |f: &dyn Fn(&TrialRecord) -> Option<f64>| {
                Stats::of(&rows.iter().filter_map(|r| f(r)).collect::<Vec<_>>())
            };
            let m = rows.len() as f64;
            GroupSummary {
                k,
                outlier_distance: f64::from_bits(bits),
                trials: rows.len(),
                observed_displacement: col(&|r| r.observed_displacement),
                mean_displacement: col(&|r| r.mean_displacement),
                sod_gap: col(&|r| r.sod_gap),
                bound_thm1: bound(&|r| r.bound_thm1),
                bound_thm2: bound(&|r| r.bound_thm2),
                bound_thm3: bound(&|r| r.bound_thm3),
                bound_thm4: bound(&|r| r.bound_thm4),
                bound_thm5: bound(&|r| r.bound_thm5),
                bound_thm6: bound(&|r| r.bound_thm6),
                zero_displacement_fraction: rows.iter().filter(|r| r.observed_displacement == 0.0).count()
                    as f64
                    / m,
                converged_fraction: rows.iter().filter(|r| r.solver_converged).count() as f64 / m,
                violations: rows.iter().filter(|r| !r.violations(slack).is_empty()).count(),
            }
        })
        .collect();
    TrialSummary {
        schema: format!("{}/v{}", TRIAL_SCHEMA.name, TRIAL_SCHEMA.version),
        rows: records.len(),
        slack,
        violations: total,
        violations_by_bound: by_bound,
        unconverged_rows: records.iter().filter(|r| !r.solver_converged).count(),
        groups,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;
    use crate::kits::{RankingKit, RealKit};

    fn cfg(json: &str) -> Resolved {
        ExperimentConfig::from_json(json).unwrap().resolve().unwrap()
    }

    #[test]
    fn rows_roundtrip_and_order() {
        let c = cfg(r#"{"experiment": "bounds_reals", "seed": 4, "trials": 3, "n": 21, "k": [0, 2, 10],
                        "outlier_distance": [50, 500]}"#);
        let recs = run_trials(&RealKit::from_config(&c), &c).unwrap();
        assert_eq!(recs.len(), 3 * 3 * 2);
        let keys: Vec<_> = recs.iter().map(|r| (r.trial_index, r.k)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for r in &recs {
            let back = TrialRecord::from_row(&r.to_row()).unwrap();
            assert_eq!(&back, r);
            assert!(r.observed_displacement >= 0.0 && r.violations(0.0).is_empty());
        }
        assert!(recs.iter().filter(|r| r.k == 0).all(|r| r.observed_displacement == 0.0));
    }

    #[test]
    fn thread_count_does_not_change_rows() {
        let serial = cfg(r#"{"experiment": "rankings", "seed": 5, "trials": 6, "k": [0, 4], "threads": 1}"#);
        let parallel = Resolved { threads: Some(3), ..serial.clone() };
        let kit = RankingKit::from_config(&serial).unwrap();
        assert_eq!(run_trials(&kit, &serial).unwrap(), run_trials(&kit, &parallel).unwrap());
    }

    #[test]
    fn weighted_rows_only_carry_weighted_bounds() {
        let c = cfg(r#"{"experiment": "bounds_reals", "seed": 6, "trials": 2, "n": 11, "k": [2],
                        "mode": "add", "weights": {"uniform_int": [1, 3]}}"#);
        for r in run_trials(&RealKit::from_config(&c), &c).unwrap() {
            assert!(r.bound_thm2.is_none() && r.bound_thm4.is_none() && r.bound_thm5.is_some());
        }
    }

    #[test]
    fn violations_respect_slack() {
        let c = cfg(r#"{"experiment": "bounds_reals", "seed": 7, "trials": 1, "n": 11, "k": [1]}"#);
        let mut r = run_trials(&RealKit::from_config(&c), &c).unwrap().remove(0);
        let b = r.bound_thm3.unwrap();
        r.bound_thm6 = None;
        r.observed_displacement = b + 1e-3;
        assert_eq!(r.violations(0.0), vec!["thm3"]);
        assert!(r.violations(1e-2).is_empty());
    }

    #[test]
    fn summary_groups() {
        let c = cfg(r#"{"experiment": "bounds_reals", "seed": 8, "trials": 4, "n": 11, "k": [3, 0]}"#);
        let recs = run_trials(&RealKit::from_config(&c), &c).unwrap();
        let s = summarize(&recs, 0.0);
        assert_eq!(s.groups.iter().map(|g| g.k).collect::<Vec<_>>(), vec![3, 0]);
        assert_eq!(s.groups[1].zero_displacement_fraction, 1.0);
        assert_eq!(s.groups[0].trials, 4);
        assert_eq!(s.violations, 0);
    }

    #[test]
    fn weight_draws() {
        let w = draw_weights(&WeightSpec::UniformInt([2, 4]), 50, 1).unwrap();
        assert!(w.iter().all(|x| [2.0, 3.0, 4.0].contains(x)));
        assert_eq!(w, draw_weights(&WeightSpec::UniformInt([2, 4]), 50, 1).unwrap());
        assert!(draw_weights(&WeightSpec::Uniform([0.0, 1.0]), 3, 1).is_err());
        assert!(draw_weights(&WeightSpec::UniformInt([3, 2]), 3, 1).is_err());
    }
}
