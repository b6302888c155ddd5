//! Concrete domains with their distances, enumerators and weighted means.

use std::fmt::Debug;

use crate::error::{GmError, Result};
use crate::metric::DistanceFn;

pub mod generators;
pub mod integers;
pub mod ranking;
pub mod reals;
pub mod rotation;

pub use integers::{hybrid_int_distance, HybridIntDistance, Integers};
pub use ranking::{enumerate_rankings, kendall_tau, Ranking, Rankings};
pub use reals::{Euclidean, RealLine};
pub use rotation::{angular_distance, Rotation3, Rotations};

/// A domain together with its distance and optional capabilities.
pub trait Space: Send + Sync {
    type Object: Clone + PartialEq + Debug + Send + Sync + 'static;

    fn name(&self) -> &'static str;

    fn distance(&self, a: &Self::Object, b: &Self::Object) -> Result<f64>;

    /// Whether [`Space::distance`] is a metric.
    fn is_metric(&self) -> bool {
        true
    }

    fn distance_fn(&self) -> DistanceFn<Self::Object>
    where
        Self: Clone + 'static,
    {
        let space = self.clone();
        DistanceFn::fallible(self.name(), self.is_metric(), move |a, b| space.distance(a, b))
    }

    /// Object `y` with `d(x,y) = w·d(x,z)` and `d(y,z) = (1−w)·d(x,z)`.
    fn weighted_mean(&self, _x: &Self::Object, _z: &Self::Object, _w: f64) -> Result<Self::Object> {
        Err(GmError::Capability {
            space: self.name(),
            capability: "weighted_mean",
        })
    }

    /// Number of candidates an enumeration would yield, if enumerable.
    fn candidate_count(&self) -> Option<u64> {
        None
    }

    fn enumerate(&self) -> Result<Box<dyn Iterator<Item = Self::Object> + '_>> {
        Err(GmError::Capability {
            space: self.name(),
            capability: "enumeration",
        })
    }
}

pub(crate) fn check_weight(w: f64) -> Result<()> {
    if (0.0..=1.0).contains(&w) {
        Ok(())
    } else {
        Err(GmError::invalid(format!("weighted-mean weight must lie in [0, 1], got {w}")))
    }
}
