//! Trial kits for the three experiment spaces.

use gmedian_core::rng::{derive_seed, purpose, rng_from_seed};
use gmedian_core::solvers::{
    real_line_mean, real_line_median, so3_mean, so3_median, MedianSolver, RankingMedianSolver,
};
use gmedian_core::spaces::generators::{
    normal_reals, outlier_angle, outlier_rankings, outlier_rotations, perturbed_rankings,
    perturbed_rotations, random_ranking, random_rotation,
};
use gmedian_core::spaces::rotation::random_axis;
use gmedian_core::spaces::{angular_distance, kendall_tau, Ranking, Rotation3};
use gmedian_core::{MedianResult, WeightedSet};

use crate::config::Resolved;
use crate::error::CliResult;
use crate::trials::Kit;

/// Normal data around 0; every outlier sits at the configured distance.
pub struct RealKit {
    pub sigma: f64,
    pub distances: Vec<f64>,
}

impl RealKit {
    pub fn from_config(cfg: &Resolved) -> Self {
        Self {
            sigma: cfg.sigma,
            distances: cfg.outlier_distances.clone(),
        }
    }
}

impl Kit for RealKit {
    type Obj = f64;

    fn gap(&self) -> f64 {
        0.0
    }

    fn generate(&self, n: usize, data_seed: u64) -> CliResult<Vec<f64>> {
        Ok(normal_reals(n, 0.0, self.sigma, data_seed)?)
    }

    fn outliers(&self, k: usize, _: u64, _: u64, distance: f64) -> CliResult<Vec<f64>> {
        Ok(vec![distance; k])
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        (a - b).abs()
    }

    fn median(&self, set: &WeightedSet<f64>) -> CliResult<MedianResult<f64>> {
        Ok(real_line_median(set)?)
    }

    fn mean(&self, set: &WeightedSet<f64>) -> CliResult<MedianResult<f64>> {
        Ok(real_line_mean(set)?)
    }

    fn outlier_distances(&self) -> Vec<f64> {
        self.distances.clone()
    }
}

/// Noisy copies of a random base rotation; outliers are noisy copies of a
/// second base `angle` away from the first.
pub struct RotationKit {
    pub sigma: f64,
    pub angle: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl RotationKit {
    pub fn from_config(cfg: &Resolved) -> Self {
        Self {
            sigma: cfg.sigma,
            angle: cfg.outlier_angle.unwrap_or_else(|| outlier_angle(cfg.sigma)),
            tol: cfg.tol,
            max_iter: cfg.max_iter,
        }
    }

    fn base(data_seed: u64) -> Rotation3 {
        random_rotation(derive_seed(data_seed, &[purpose::BASE]))
    }
}

impl Kit for RotationKit {
    type Obj = Rotation3;

    fn gap(&self) -> f64 {
        0.0
    }

    fn slack(&self) -> f64 {
        10.0 * self.tol
    }

    fn generate(&self, n: usize, data_seed: u64) -> CliResult<Vec<Rotation3>> {
        Ok(perturbed_rotations(n, &Self::base(data_seed), self.sigma, data_seed)?)
    }

    fn outliers(&self, k: usize, data_seed: u64, seed: u64, _: f64) -> CliResult<Vec<Rotation3>> {
        if k == 0 {
            return Ok(Vec::new());
        }
        // One far base per trial, shared by every k.
        let axis = random_axis(&mut rng_from_seed(derive_seed(data_seed, &[purpose::OUTLIERS])));
        let far = Self::base(data_seed).compose(&Rotation3::exp(&(axis * self.angle)));
        Ok(outlier_rotations(k, &far, self.sigma, seed)?)
    }

    fn distance(&self, a: &Rotation3, b: &Rotation3) -> f64 {
        angular_distance(a, b)
    }

    fn median(&self, set: &WeightedSet<Rotation3>) -> CliResult<MedianResult<Rotation3>> {
        Ok(so3_median(set, self.tol, self.max_iter)?)
    }

    fn mean(&self, set: &WeightedSet<Rotation3>) -> CliResult<MedianResult<Rotation3>> {
        Ok(so3_mean(set, self.tol, self.max_iter)?)
    }

    fn outlier_distances(&self) -> Vec<f64> {
        vec![self.angle]
    }
}

/// Swap-noise copies of a random base ranking; outliers are swap-noise
/// copies of its reversal.
pub struct RankingKit {
    pub swap_count: usize,
    pub outlier_swap_count: usize,
    median: RankingMedianSolver,
    mean: RankingMedianSolver,
}

impl RankingKit {
    pub fn from_config(cfg: &Resolved) -> CliResult<Self> {
        let median = RankingMedianSolver::new(cfg.ranking_len, 1)?;
        let mean = median.with_power(2)?;
        Ok(Self {
            swap_count: cfg.swap_count,
            outlier_swap_count: cfg.outlier_swap_count,
            median,
            mean,
        })
    }

    fn base(&self, data_seed: u64) -> CliResult<Ranking> {
        Ok(random_ranking(
            self.median.ranking_len(),
            derive_seed(data_seed, &[purpose::BASE]),
        )?)
    }
}

impl Kit for RankingKit {
    type Obj = Ranking;

    fn gap(&self) -> f64 {
        1.0
    }

    fn generate(&self, n: usize, data_seed: u64) -> CliResult<Vec<Ranking>> {
        Ok(perturbed_rankings(n, &self.base(data_seed)?, self.swap_count, data_seed)?)
    }

    fn outliers(&self, k: usize, data_seed: u64, seed: u64, _: f64) -> CliResult<Vec<Ranking>> {
        if k == 0 {
            return Ok(Vec::new());
        }
        let far = self.base(data_seed)?.reversed();
        Ok(outlier_rankings(k, &far, self.outlier_swap_count, seed)?)
    }

    fn distance(&self, a: &Ranking, b: &Ranking) -> f64 {
        kendall_tau(a, b).expect("rankings of one trial share a length") as f64
    }

    fn median(&self, set: &WeightedSet<Ranking>) -> CliResult<MedianResult<Ranking>> {
        Ok(self.median.solve(set)?)
    }

    fn mean(&self, set: &WeightedSet<Ranking>) -> CliResult<MedianResult<Ranking>> {
        Ok(self.mean.solve(set)?)
    }

    /// Kendall-tau distance between the base and its reversal.
    fn outlier_distances(&self) -> Vec<f64> {
        let m = self.median.ranking_len();
        vec![(m * (m - 1) / 2) as f64]
    }
}
