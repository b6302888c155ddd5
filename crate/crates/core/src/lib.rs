//! Generalized medians over pluggable metric spaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`metric`]: the distance abstraction, the sum-of-distances objective,
//!   metric-axiom checks and constructions that turn arbitrary functions
//!   into metrics.
//! - [`spaces`]: concrete domains (reals, vectors, rankings, rotations,
//!   integers) with their distances, generators and weighted means.
//! - [`solvers`]: medoid, exhaustive search, Weiszfeld, SO(3) median/mean and
//!   closed-form solvers on the real line.
//! - [`bounds`]: closed-form displacement and breakdown bounds.
//! - [`corruption`]: added/replaced outlier injection and displacement.
//!
//! A generalized median of a weighted multi-set `O` under distance `d` is any
//! minimiser of `Ω(o) = Σ wᵢ·d(o, oᵢ)` over the whole domain. With a metric
//! `d` it tolerates up to half of the inputs being corrupted; with `d^p`,
//! `p ≥ 2`, a single outlier drags it arbitrarily far.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod corruption;
pub mod error;
pub mod metric;
pub mod rng;
pub mod solvers;
pub mod spaces;

pub use error::{GmError, Result};
pub use metric::{DistanceFn, WeightedSet};
pub use solvers::MedianResult;
