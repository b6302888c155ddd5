//! Seeded data generators for the experiments.
//!
//! Noise models:
//! - rankings: exactly `swap_count` uniformly chosen adjacent transpositions,
//!   so each swap moves the Kendall-tau distance by exactly one;
//! - rotations: the base composed with a random rotation whose axis is
//!   uniform on the sphere and whose angle is `Normal(0, angle_sigma)`.
//!
//! Outliers are drawn with the same noise around a far base: the reversed
//! ranking, or the base rotated by `min(3σ + π/2, π)` about a random axis.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{GmError, Result};
use crate::rng::rng_from_seed;
use crate::spaces::ranking::Ranking;
use crate::spaces::rotation::{random_axis, Rotation3};

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(GmError::invalid("generator needs n >= 1"));
    }
    Ok(())
}

fn normal(mu: f64, sigma: f64) -> Result<Normal<f64>> {
    Normal::new(mu, sigma).map_err(|e| GmError::invalid(format!("bad normal parameters: {e}")))
}

pub fn normal_reals(n: usize, mu: f64, sigma: f64, seed: u64) -> Result<Vec<f64>> {
    check_count(n)?;
    if !(sigma >= 0.0) || !mu.is_finite() {
        return Err(GmError::invalid("normal_reals needs finite mu and sigma >= 0"));
    }
    let dist = normal(mu, sigma)?;
    let mut rng = rng_from_seed(seed);
    Ok((0..n).map(|_| dist.sample(&mut rng)).collect())
}

pub fn random_ranking(m: usize, seed: u64) -> Result<Ranking> {
    let mut perm: Vec<u32> = (1..=m as u32).collect();
    perm.shuffle(&mut rng_from_seed(seed));
    Ranking::new(perm)
}

pub fn random_rotation(seed: u64) -> Rotation3 {
    Rotation3::random_uniform(&mut rng_from_seed(seed))
}

/// Applies `swap_count` random adjacent transpositions to `base`.
pub fn swap_noise<R: Rng + ?Sized>(base: &Ranking, swap_count: usize, rng: &mut R) -> Result<Ranking> {
    let m = base.len();
    if swap_count > 0 && m < 2 {
        return Err(GmError::invalid("cannot swap elements of a ranking of length 1"));
    }
    let mut r = base.clone();
    for _ in 0..swap_count {
        r.swap_ranks(rng.random_range(1..m as u32));
    }
    Ok(r)
}

pub fn perturbed_rankings(
    n: usize,
    base: &Ranking,
    swap_count: usize,
    seed: u64,
) -> Result<Vec<Ranking>> {
    check_count(n)?;
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| swap_noise(base, swap_count, &mut rng)).collect()
}

pub fn far_ranking(base: &Ranking) -> Ranking {
    base.reversed()
}

pub fn outlier_rankings(
    n: usize,
    far_base: &Ranking,
    swap_count: usize,
    seed: u64,
) -> Result<Vec<Ranking>> {
    perturbed_rankings(n, far_base, swap_count, seed)
}

pub fn rotation_noise<R: Rng + ?Sized>(
    base: &Rotation3,
    angle: &Normal<f64>,
    rng: &mut R,
) -> Rotation3 {
    let axis = random_axis(rng);
    let theta = angle.sample(rng);
    base.compose(&Rotation3::exp(&(axis * theta)))
}

pub fn perturbed_rotations(
    n: usize,
    base: &Rotation3,
    angle_sigma: f64,
    seed: u64,
) -> Result<Vec<Rotation3>> {
    check_count(n)?;
    if !(angle_sigma >= 0.0) {
        return Err(GmError::invalid("angle_sigma must be >= 0"));
    }
    let angle = normal(0.0, angle_sigma)?;
    let mut rng = rng_from_seed(seed);
    Ok((0..n).map(|_| rotation_noise(base, &angle, &mut rng)).collect())
}

/// Separation between the inlier base and the outlier base.
pub fn outlier_angle(angle_sigma: f64) -> f64 {
    (3.0 * angle_sigma + FRAC_PI_2).min(PI)
}

pub fn far_rotation(base: &Rotation3, angle_sigma: f64, seed: u64) -> Rotation3 {
    let axis = random_axis(&mut rng_from_seed(seed));
    base.compose(&Rotation3::exp(&(axis * outlier_angle(angle_sigma))))
}

pub fn outlier_rotations(
    n: usize,
    far_base: &Rotation3,
    angle_sigma: f64,
    seed: u64,
) -> Result<Vec<Rotation3>> {
    perturbed_rotations(n, far_base, angle_sigma, seed)
}
