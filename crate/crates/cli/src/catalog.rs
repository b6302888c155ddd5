//! Named spaces: dataset solving and metric-axiom reports.

use std::path::Path;

use gmedian_core::metric::{check_metric_axioms, power_distance, MetricCheckReport};
use gmedian_core::rng::{derive_seed, purpose, rng_from_seed};
use gmedian_core::solvers::{
    exhaustive_median, MedianSolver, RankingMedianSolver, RealLineSolver, So3Solver,
    WeiszfeldSolver, DEFAULT_CANDIDATE_CAP,
};
use gmedian_core::spaces::generators::{normal_reals, random_ranking};
use gmedian_core::spaces::{
    enumerate_rankings, Euclidean, HybridIntDistance, Integers, Ranking, RealLine, Rotation3,
    Rotations, Space, Rankings,
};
use gmedian_core::{DistanceFn, MedianResult, WeightedSet};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dataset;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SpaceName {
    Real,
    Euclidean,
    Ranking,
    Rotation,
    Integer,
    HybridInteger,
    SquaredReal,
}

impl SpaceName {
    pub fn parse(s: &str) -> CliResult<Self> {
        <Self as clap::ValueEnum>::from_str(s, true)
            .map_err(|_| CliError::Usage(format!("unknown space {s:?}")))
    }

    pub fn label(self) -> &'static str {
        match self {
            SpaceName::Real => "real",
            SpaceName::Euclidean => "euclidean",
            SpaceName::Ranking => "ranking",
            SpaceName::Rotation => "rotation",
            SpaceName::Integer => "integer",
            SpaceName::HybridInteger => "hybrid-integer",
            SpaceName::SquaredReal => "squared-real",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOpts {
    pub p: u32,
    pub tol: f64,
    pub max_iter: usize,
    /// Threshold of the hybrid-integer distance.
    pub c: i64,
}

fn result_json<T: Serialize>(space: SpaceName, p: u32, n: usize, r: MedianResult<T>) -> CliResult<Value> {
    Ok(json!({
        "space": space.label(),
        "p": p,
        "n": n,
        "median": serde_json::to_value(&r.median)?,
        "omega": r.omega,
        "iterations": r.iterations,
        "converged": r.converged,
        "solver": r.solver,
    }))
}

fn int_range(set: &WeightedSet<i64>, extra: Option<i64>) -> CliResult<Integers> {
    let mut lo = *set.objects().iter().min().expect("non-empty dataset");
    let mut hi = *set.objects().iter().max().expect("non-empty dataset");
    if let Some(c) = extra {
        lo = lo.min(-c);
        hi = hi.max(c);
    }
    Ok(Integers::new(lo, hi)?)
}

/// Solves the dataset at `path` and returns the result as JSON.
pub fn solve_dataset(space: SpaceName, path: &Path, o: SolveOpts) -> CliResult<Value> {
    match space {
        SpaceName::Real => {
            let set = dataset::read_reals(path)?;
            result_json(space, o.p, set.len(), RealLineSolver { p: o.p }.solve(&set)?)
        }
        SpaceName::Euclidean => {
            if o.p != 1 {
                return Err(CliError::Usage("euclidean median supports p = 1 only".into()));
            }
            let set = dataset::read_vectors(path)?;
            let solver = WeiszfeldSolver {
                tol: o.tol,
                max_iter: o.max_iter,
            };
            result_json(space, o.p, set.len(), solver.solve(&set)?)
        }
        SpaceName::Ranking => {
            let set: WeightedSet<Ranking> = dataset::read_json(path)?;
            let m = set.objects()[0].len();
            result_json(space, o.p, set.len(), RankingMedianSolver::new(m, o.p)?.solve(&set)?)
        }
        SpaceName::Rotation => {
            let set: WeightedSet<Rotation3> = dataset::read_json(path)?;
            let solver = So3Solver {
                p: o.p,
                tol: o.tol,
                max_iter: o.max_iter,
            };
            result_json(space, o.p, set.len(), solver.solve(&set)?)
        }
        SpaceName::Integer => {
            let set = dataset::read_integers(path)?;
            let ints = int_range(&set, None)?;
            let r = exhaustive_median(&ints, &ints.distance_fn(), &set, o.p, DEFAULT_CANDIDATE_CAP)?;
            result_json(space, o.p, set.len(), r)
        }
        SpaceName::HybridInteger => {
            let set = dataset::read_integers(path)?;
            let h = HybridIntDistance::new(o.c)?;
            let ints = int_range(&set, Some(o.c))?;
            let r = exhaustive_median(&ints, &h.distance_fn(), &set, o.p, DEFAULT_CANDIDATE_CAP)?;
            result_json(space, o.p, set.len(), r)
        }
        SpaceName::SquaredReal => Err(CliError::Usage(
            "squared-real is for check-metric; use --space real --p 2".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricOpts {
    /// Ranking length.
    pub m: usize,
    pub c: i64,
    /// Power applied to the base distance.
    pub p: u32,
    pub samples: usize,
    pub budget: u64,
    pub tol: f64,
    pub seed: u64,
}

impl Default for MetricOpts {
    fn default() -> Self {
        Self {
            m: 4,
            c: 2,
            p: 1,
            samples: 60,
            budget: 100_000,
            tol: 1e-9,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRow {
    pub space: &'static str,
    pub p: u32,
    pub metric_claim: bool,
    pub sample_size: usize,
    pub clean: bool,
    /// The objects of the worst triangle witness, as JSON.
    pub witness_objects: Option<String>,
    pub report: MetricCheckReport,
}

fn check<T>(
    space: SpaceName,
    p: u32,
    d: DistanceFn<T>,
    sample: Vec<T>,
    o: &MetricOpts,
) -> CliResult<MetricRow>
where
    T: Serialize + PartialEq + Sync + 'static,
{
    let d = if p == 1 { d } else { power_distance(&d, p)? };
    let report = check_metric_axioms(&d, &sample, o.budget, o.tol, o.seed)?;
    let witness_objects = report
        .worst_triangle
        .map(|w| serde_json::to_string(&w.indices.map(|i| &sample[i])))
        .transpose()?;
    Ok(MetricRow {
        space: space.label(),
        p,
        metric_claim: d.metric_claim(),
        sample_size: sample.len(),
        clean: report.is_clean(),
        witness_objects,
        report,
    })
}

fn sample_seed(o: &MetricOpts) -> u64 {
    derive_seed(o.seed, &[purpose::DATA])
}

/// Reals around 0 that always contain the triple `0, 0.5, 1`.
fn real_sample(o: &MetricOpts) -> CliResult<Vec<f64>> {
    let mut v = vec![0.0, 0.5, 1.0];
    if o.samples > 3 {
        v.extend(normal_reals(o.samples - 3, 0.0, 10.0, sample_seed(o))?);
    }
    Ok(v)
}

/// Axiom report for a named space on a generated sample.
///
/// Rankings of length `m ≤ 4` and the hybrid-integer core `[−c, c]` are
/// checked on every object; other spaces on `samples` generated objects.
pub fn check_space(space: SpaceName, o: &MetricOpts) -> CliResult<MetricRow> {
    if o.samples == 0 {
        return Err(CliError::Usage("samples must be >= 1".into()));
    }
    match space {
        SpaceName::Real => check(space, o.p, RealLine.distance_fn(), real_sample(o)?, o),
        SpaceName::SquaredReal => check(space, 2 * o.p, RealLine.distance_fn(), real_sample(o)?, o),
        SpaceName::Euclidean => {
            let coords = normal_reals(3 * o.samples, 0.0, 10.0, sample_seed(o))?;
            let sample = coords.chunks(3).map(<[f64]>::to_vec).collect();
            check(space, o.p, Euclidean::new(3)?.distance_fn(), sample, o)
        }
        SpaceName::Ranking => {
            let sample: Vec<Ranking> = if o.m <= 4 {
                enumerate_rankings(o.m)?.collect()
            } else {
                (0..o.samples as u64)
                    .map(|i| random_ranking(o.m, derive_seed(o.seed, &[i, purpose::DATA])))
                    .collect::<gmedian_core::Result<_>>()?
            };
            check(space, o.p, Rankings::new(o.m)?.distance_fn(), sample, o)
        }
        SpaceName::Rotation => {
            let mut rng = rng_from_seed(sample_seed(o));
            let sample = (0..o.samples).map(|_| Rotation3::random_uniform(&mut rng)).collect();
            check(space, o.p, Rotations.distance_fn(), sample, o)
        }
        SpaceName::Integer => {
            let half = (o.samples / 2) as i64;
            check(space, o.p, Integers::new(-half, half)?.distance_fn(), (-half..=half).collect(), o)
        }
        SpaceName::HybridInteger => {
            let h = HybridIntDistance::new(o.c)?;
            check(space, o.p, h.distance_fn(), (-o.c..=o.c).collect(), o)
        }
    }
}

/// Axiom report on the objects of a dataset file.
pub fn check_dataset(space: SpaceName, path: &Path, o: &MetricOpts) -> CliResult<MetricRow> {
    match space {
        SpaceName::Real | SpaceName::SquaredReal => {
            let p = if space == SpaceName::SquaredReal { 2 * o.p } else { o.p };
            let (v, _) = dataset::read_reals(path)?.into_parts();
            check(space, p, RealLine.distance_fn(), v, o)
        }
        SpaceName::Euclidean => {
            let (v, _) = dataset::read_vectors(path)?.into_parts();
            let dim = v[0].len();
            check(space, o.p, Euclidean::new(dim)?.distance_fn(), v, o)
        }
        SpaceName::Ranking => {
            let (v, _) = dataset::read_json::<Ranking>(path)?.into_parts();
            let m = v[0].len();
            check(space, o.p, Rankings::new(m)?.distance_fn(), v, o)
        }
        SpaceName::Rotation => {
            let (v, _) = dataset::read_json::<Rotation3>(path)?.into_parts();
            check(space, o.p, Rotations.distance_fn(), v, o)
        }
        SpaceName::Integer => {
            let (v, _) = dataset::read_integers(path)?.into_parts();
            check(space, o.p, Integers::new(0, 0)?.distance_fn(), v, o)
        }
        SpaceName::HybridInteger => {
            let (v, _) = dataset::read_integers(path)?.into_parts();
            check(space, o.p, HybridIntDistance::new(o.c)?.distance_fn(), v, o)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_names() {
        assert_eq!(SpaceName::parse("hybrid-integer").unwrap(), SpaceName::HybridInteger);
        assert_eq!(SpaceName::parse("Ranking").unwrap().label(), "ranking");
        assert!(matches!(SpaceName::parse("torus"), Err(CliError::Usage(_))));
    }

    #[test]
    fn reports() {
        let o = MetricOpts::default();
        let r = check_space(SpaceName::Ranking, &o).unwrap();
        assert!(r.clean && r.report.exhaustive && r.sample_size == 24);
        let h = check_space(SpaceName::HybridInteger, &o).unwrap();
        assert!(!h.clean && !h.metric_claim);
        let sq = check_space(SpaceName::SquaredReal, &o).unwrap();
        assert!(sq.report.triangle_violations > 0);
        assert!(check_space(SpaceName::Integer, &o).unwrap().clean);
    }
}
