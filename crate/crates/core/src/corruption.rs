//! Outlier injection: adding objects to a set or replacing some of them.

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{GmError, Result};
use crate::metric::{DistanceFn, WeightedSet};
use crate::rng::{derive_seed, purpose, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorruptionMode {
    Add,
    Replace,
}

impl CorruptionMode {
    pub fn label(self) -> &'static str {
        match self {
            CorruptionMode::Add => "add",
            CorruptionMode::Replace => "replace",
        }
    }
}

/// Which objects to inject and, in replace mode, which ones they overwrite.
///
/// JSON fields: `mode` (`"add"`/`"replace"`), `k`, `replaced_indices`
/// (sorted, empty in add mode), `outliers`, `outlier_weights` (add mode
/// only, empty means all 1) and `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorruptionPlan<T> {
    pub mode: CorruptionMode,
    pub k: usize,
    pub replaced_indices: Vec<usize>,
    pub outliers: Vec<T>,
    #[serde(default)]
    pub outlier_weights: Vec<f64>,
    pub seed: u64,
}

/// The corrupted set `Q` and, for every object of `Q` that came from `O`,
/// its original index.
#[derive(Debug, Clone, PartialEq)]
pub struct Corrupted<T> {
    pub set: WeightedSet<T>,
    /// Pairs `(index in Q, index in O)` for the survivors `X = O ∩ Q`.
    pub survivors: Vec<(usize, usize)>,
}

impl<T: Clone> Corrupted<T> {
    /// The survivors `X` as their own weighted set, `None` when all were
    /// replaced.
    pub fn survivor_set(&self) -> Option<WeightedSet<T>> {
        if self.survivors.is_empty() {
            return None;
        }
        let (objs, ws) = self
            .survivors
            .iter()
            .map(|&(q, _)| (self.set.objects()[q].clone(), self.set.weights()[q]))
            .unzip();
        WeightedSet::new(objs, ws).ok()
    }
}

/// `k` distinct indices in `0..n`, uniform without replacement, sorted.
pub fn draw_indices(n: usize, k: usize, seed: u64) -> Result<Vec<usize>> {
    if k > n {
        return Err(GmError::invalid(format!("cannot replace {k} of {n} objects")));
    }
    let mut rng = rng_from_seed(derive_seed(seed, &[purpose::INDICES]));
    let mut v = index::sample(&mut rng, n, k).into_vec();
    v.sort_unstable();
    Ok(v)
}

impl<T> CorruptionPlan<T> {
    /// Add `outliers` with weight 1 each.
    pub fn add(outliers: Vec<T>, seed: u64) -> Self {
        Self {
            mode: CorruptionMode::Add,
            k: outliers.len(),
            replaced_indices: Vec::new(),
            outliers,
            outlier_weights: Vec::new(),
            seed,
        }
    }

    pub fn add_weighted(outliers: Vec<T>, weights: Vec<f64>, seed: u64) -> Result<Self> {
        if weights.len() != outliers.len() {
            return Err(GmError::invalid(format!(
                "{} outliers but {} weights",
                outliers.len(),
                weights.len()
            )));
        }
        Ok(Self {
            outlier_weights: weights,
            ..Self::add(outliers, seed)
        })
    }

    /// Replace `outliers.len()` objects of a size-`n` set, chosen from the
    /// seeded index stream.
    pub fn replace(n: usize, outliers: Vec<T>, seed: u64) -> Result<Self> {
        let replaced_indices = draw_indices(n, outliers.len(), seed)?;
        Ok(Self {
            mode: CorruptionMode::Replace,
            k: outliers.len(),
            replaced_indices,
            outliers,
            outlier_weights: Vec::new(),
            seed,
        })
    }

    /// Replace the objects at the given indices.
    pub fn replace_at(mut indices: Vec<usize>, outliers: Vec<T>, seed: u64) -> Result<Self> {
        if indices.len() != outliers.len() {
            return Err(GmError::invalid(format!(
                "{} indices but {} outliers",
                indices.len(),
                outliers.len()
            )));
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(GmError::invalid("replaced indices must be distinct"));
        }
        Ok(Self {
            mode: CorruptionMode::Replace,
            k: outliers.len(),
            replaced_indices: indices,
            outliers,
            outlier_weights: Vec::new(),
            seed,
        })
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.outliers.len() != self.k {
            return Err(GmError::invalid(format!(
                "plan has k = {} but {} outliers",
                self.k,
                self.outliers.len()
            )));
        }
        match self.mode {
            CorruptionMode::Add => {
                if !self.replaced_indices.is_empty() {
                    return Err(GmError::invalid("add plans must not list replaced indices"));
                }
                if !self.outlier_weights.is_empty() && self.outlier_weights.len() != self.k {
                    return Err(GmError::invalid("outlier weights must match the outliers"));
                }
            }
            CorruptionMode::Replace => {
                if self.k > n {
                    return Err(GmError::invalid(format!("cannot replace {} of {n} objects", self.k)));
                }
                if self.replaced_indices.len() != self.k {
                    return Err(GmError::invalid("replace plans need exactly k indices"));
                }
                if let Some(i) = self.replaced_indices.iter().find(|&&i| i >= n) {
                    return Err(GmError::invalid(format!("index {i} out of range for {n} objects")));
                }
                if self.replaced_indices.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(GmError::invalid("replaced indices must be sorted and distinct"));
                }
                if !self.outlier_weights.is_empty() {
                    return Err(GmError::invalid("replaced objects keep their original weights"));
                }
            }
        }
        Ok(())
    }

    /// Builds `Q`. Added objects go after the originals; replaced objects
    /// keep their position and weight.
    pub fn apply(&self, set: &WeightedSet<T>) -> Result<Corrupted<T>>
    where
        T: Clone,
    {
        self.validate(set.len())?;
        let (mut objs, mut weights) = set.clone().into_parts();
        let survivors = match self.mode {
            CorruptionMode::Add => {
                objs.extend(self.outliers.iter().cloned());
                if self.outlier_weights.is_empty() {
                    weights.extend(std::iter::repeat_n(1.0, self.k));
                } else {
                    weights.extend(self.outlier_weights.iter().copied());
                }
                (0..set.len()).map(|i| (i, i)).collect()
            }
            CorruptionMode::Replace => {
                for (&i, o) in self.replaced_indices.iter().zip(&self.outliers) {
                    objs[i] = o.clone();
                }
                let mut replaced = self.replaced_indices.iter().peekable();
                (0..set.len())
                    .filter(|i| {
                        if replaced.peek() == Some(&i) {
                            replaced.next();
                            false
                        } else {
                            true
                        }
                    })
                    .map(|i| (i, i))
                    .collect()
            }
        };
        Ok(Corrupted {
            set: WeightedSet::new(objs, weights)?,
            survivors,
        })
    }

    /// Weights of the objects that were added or that now sit at replaced
    /// positions.
    pub fn corrupted_weights(&self, set: &WeightedSet<T>) -> Vec<f64> {
        match self.mode {
            CorruptionMode::Add if self.outlier_weights.is_empty() => vec![1.0; self.k],
            CorruptionMode::Add => self.outlier_weights.clone(),
            CorruptionMode::Replace => self
                .replaced_indices
                .iter()
                .map(|&i| set.weights()[i])
                .collect(),
        }
    }
}

/// `δ(ō, q̄)`.
pub fn displacement<T: ?Sized + 'static>(
    d: &DistanceFn<T>,
    original_median: &T,
    corrupted_median: &T,
) -> Result<f64> {
    d.eval(original_median, corrupted_median)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{real_line_median, MedianSolver, RankingMedianSolver};
    use crate::spaces::{Ranking, RealLine, Space};

    fn r(v: &[u32]) -> Ranking {
        Ranking::new(v.to_vec()).unwrap()
    }

    fn four_rankings() -> WeightedSet<Ranking> {
        WeightedSet::uniform(vec![
            r(&[1, 2, 4, 3, 5]),
            r(&[1, 2, 3, 5, 4]),
            r(&[2, 1, 3, 4, 5]),
            r(&[1, 3, 2, 4, 5]),
        ])
        .unwrap()
    }

    #[test]
    fn add_nothing_is_identity() {
        let set = WeightedSet::uniform(vec![1.0, 2.0, 3.0]).unwrap();
        let q = CorruptionPlan::add(vec![], 0).apply(&set).unwrap();
        assert_eq!(q.set, set);
        assert_eq!(q.survivors, vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn full_replacement() {
        let set = WeightedSet::new(vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]).unwrap();
        let q = CorruptionPlan::replace(3, vec![9.0; 3], 4).unwrap().apply(&set).unwrap();
        assert_eq!(q.set.objects(), &[9.0; 3]);
        assert_eq!(q.set.weights(), set.weights());
        assert!(q.survivors.is_empty());
        assert!(q.survivor_set().is_none());
    }

    #[test]
    fn added_reversals() {
        let set = four_rankings();
        let plan = CorruptionPlan::add(vec![r(&[5, 4, 3, 2, 1]); 3], 0);
        let q = plan.apply(&set).unwrap();
        assert_eq!(q.set.len(), 7);
        let med = RankingMedianSolver::new(5, 1).unwrap().solve(&q.set).unwrap();
        assert_eq!(med.omega, 32.0);
    }

    #[test]
    fn replaced_ranking_displacement() {
        let set = four_rankings();
        let space = crate::spaces::Rankings::new(5).unwrap();
        let solver = RankingMedianSolver::new(5, 1).unwrap();
        let o_bar = solver.solve(&set).unwrap().median;
        for i in 0..4 {
            let plan = CorruptionPlan::replace_at(vec![i], vec![r(&[5, 4, 3, 2, 1])], 0).unwrap();
            let q = plan.apply(&set).unwrap();
            let q_bar = solver.solve(&q.set).unwrap().median;
            let disp = displacement(&space.distance_fn(), &o_bar, &q_bar).unwrap();
            assert!(disp <= 6.0);
        }
    }

    #[test]
    fn replace_keeps_weights_and_positions() {
        let set = WeightedSet::new(vec![0.0, 1.0, 2.0, 3.0, 4.0], vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let plan = CorruptionPlan::replace_at(vec![3, 1], vec![10.0, 11.0], 0).unwrap();
        assert_eq!(plan.replaced_indices, vec![1, 3]);
        let q = plan.apply(&set).unwrap();
        assert_eq!(q.set.objects(), &[0.0, 10.0, 2.0, 11.0, 4.0]);
        assert_eq!(q.set.weights(), set.weights());
        assert_eq!(q.survivors, vec![(0, 0), (2, 2), (4, 4)]);
        assert_eq!(plan.corrupted_weights(&set), vec![2.0, 4.0]);
        let x = q.survivor_set().unwrap();
        assert_eq!(x.objects(), &[0.0, 2.0, 4.0]);
    }

    #[test]
    fn weighted_add() {
        let set = WeightedSet::uniform(vec![0.0, 1.0]).unwrap();
        let plan = CorruptionPlan::add_weighted(vec![5.0], vec![0.5], 0).unwrap();
        let q = plan.apply(&set).unwrap();
        assert_eq!(q.set.weights(), &[1.0, 1.0, 0.5]);
        assert!(CorruptionPlan::add_weighted(vec![5.0], vec![], 0).is_err());
    }

    #[test]
    fn invalid_plans() {
        let set = WeightedSet::uniform(vec![0.0, 1.0]).unwrap();
        assert!(CorruptionPlan::replace(2, vec![1.0; 3], 0).is_err());
        assert!(CorruptionPlan::replace_at(vec![1, 1], vec![1.0; 2], 0).is_err());
        let plan = CorruptionPlan::replace_at(vec![5], vec![1.0], 0).unwrap();
        assert!(matches!(plan.apply(&set), Err(GmError::InvalidInput(_))));
        let mut bad = CorruptionPlan::add(vec![1.0], 0);
        bad.k = 2;
        assert!(bad.apply(&set).is_err());
    }

    #[test]
    fn seeded_indices_reproduce() {
        let a = CorruptionPlan::replace(50, vec![0.0; 10], 42).unwrap();
        let b = CorruptionPlan::replace(50, vec![0.0; 10], 42).unwrap();
        assert_eq!(a, b);
        let c = CorruptionPlan::replace(50, vec![0.0; 10], 43).unwrap();
        assert_ne!(a.replaced_indices, c.replaced_indices);
    }

    #[test]
    fn majority_replacement_moves_median_to_outlier() {
        let n = 11;
        let set = WeightedSet::uniform((0..n).map(|i| i as f64 * 0.1).collect()).unwrap();
        let o_bar = real_line_median(&set).unwrap().median;
        let big = 1000.0;
        for k in 0..=n {
            let plan = CorruptionPlan::replace(n, vec![big; k], k as u64).unwrap();
            let q = plan.apply(&set).unwrap();
            let q_bar = real_line_median(&q.set).unwrap().median;
            let disp = displacement(&RealLine.distance_fn(), &o_bar, &q_bar).unwrap();
            if k >= n.div_ceil(2) {
                assert_eq!(q_bar, big);
                assert!((disp - (big - o_bar)).abs() < 1e-9);
            } else {
                assert!(disp <= 1.0);
            }
        }
    }

    #[test]
    fn plan_json_roundtrip() {
        let plan = CorruptionPlan::replace(5, vec![r(&[2, 1, 3])], 9).unwrap();
        let s = serde_json::to_string(&plan).unwrap();
        assert!(s.contains("\"mode\":\"replace\""));
        let back: CorruptionPlan<Ranking> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, plan);
    }
}
