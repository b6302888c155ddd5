//! Generalized-median solvers.
//!
//! Exact solvers (closed forms on ℝ, medoid, exhaustive enumeration) break
//! ties by the lowest index in input or enumeration order, so repeated runs
//! and parallel runs return the same object. Iterative solvers record the
//! objective after every accepted step in [`MedianResult::history`].

use serde::Serialize;

use crate::error::Result;
use crate::metric::WeightedSet;

pub mod exhaustive;
pub mod medoid;
pub mod pull;
pub mod real_line;
pub mod so3;
pub mod weiszfeld;

pub use exhaustive::{exhaustive_median, RankingMedianSolver, DEFAULT_CANDIDATE_CAP};
pub use medoid::medoid;
pub use pull::nonmetric_pull_empirical;
pub use real_line::{real_line_mean, real_line_median, RealLineSolver};
pub use so3::{so3_mean, so3_median, So3Solver};
pub use weiszfeld::{weiszfeld, WeiszfeldSolver};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SO3_TOL: f64 = 1e-7;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MedianResult<T> {
    pub median: T,
    /// Weighted objective at `median`.
    pub omega: f64,
    pub iterations: usize,
    pub converged: bool,
    pub solver: &'static str,
    /// Times an iterate landed on a data point (Weiszfeld-type solvers).
    pub anchor_hits: usize,
    /// Objective after each accepted iterate, starting point first.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<f64>,
}

impl<T> MedianResult<T> {
    pub(crate) fn exact(median: T, omega: f64, iterations: usize, solver: &'static str) -> Self {
        Self {
            median,
            omega,
            iterations,
            converged: true,
            solver,
            anchor_hits: 0,
            history: Vec::new(),
        }
    }
}

/// A solver usable by the experiment harness.
pub trait MedianSolver<T>: Send + Sync {
    fn solve(&self, set: &WeightedSet<T>) -> Result<MedianResult<T>>;

    fn label(&self) -> &'static str;

    /// Distance exponent `p` of the objective `Σ wᵢ·d^p`.
    fn power(&self) -> u32;
}

/// Lexicographic (value, index) minimum, used to merge parallel partial
/// results.
pub(crate) fn min_by_value_then_index(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}
