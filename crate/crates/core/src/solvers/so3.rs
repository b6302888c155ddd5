//! Median and mean rotations on SO(3).
//!
//! Both solvers start at the medoid under their own objective and take
//! tangent-space steps at the current iterate `R` using `vᵢ = Log(RᵀRᵢ)`:
//!
//! - median (`Σ wᵢθᵢ`): Riemannian Weiszfeld, `Σ wᵢvᵢ/θᵢ / Σ wᵢ/θᵢ`, with the
//!   same coincident-point guard as the Euclidean version;
//! - mean (`Σ wᵢθᵢ²`): Karcher update, `Σ wᵢvᵢ / Σ wᵢ`.
//!
//! A step that would increase the objective is halved (up to 40 times), so
//! the recorded objective never increases. Every iterate is projected back
//! onto SO(3). Convergence means the accepted step angle fell below `tol`.

use nalgebra::Vector3;

use crate::error::{GmError, Result};
use crate::metric::WeightedSet;
use crate::solvers::{medoid, MedianResult, MedianSolver};
use crate::spaces::rotation::{angular_distance, Rotation3};
use crate::spaces::{Rotations, Space};

const ANCHOR_EPS: f64 = 1e-12;
const MAX_HALVINGS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Objective {
    Median,
    Mean,
}

impl Objective {
    fn power(self) -> i32 {
        match self {
            Objective::Median => 1,
            Objective::Mean => 2,
        }
    }

    fn eval(self, set: &WeightedSet<Rotation3>, r: &Rotation3) -> f64 {
        let p = self.power();
        set.iter().map(|(ri, w)| w * angular_distance(r, ri).powi(p)).sum()
    }
}

fn direction(obj: Objective, set: &WeightedSet<Rotation3>, r: &Rotation3) -> Option<Vector3<f64>> {
    let rt = r.transpose();
    match obj {
        Objective::Mean => {
            let mut sum = Vector3::zeros();
            for (ri, w) in set.iter() {
                sum += rt.compose(ri).log() * w;
            }
            Some(sum / set.total_weight())
        }
        Objective::Median => {
            let mut anchor = 0.0;
            let mut weighted = Vector3::zeros();
            let mut inverse = 0.0;
            for (ri, w) in set.iter() {
                let v = rt.compose(ri).log();
                let theta = v.norm();
                if theta < ANCHOR_EPS {
                    anchor += w;
                    continue;
                }
                weighted += v * (w / theta);
                inverse += w / theta;
            }
            if anchor > 0.0 {
                // `weighted` is the resultant pull of the other points.
                let r = weighted.norm();
                if r <= anchor {
                    return None;
                }
                Some(weighted / inverse * (1.0 - anchor / r))
            } else {
                Some(weighted / inverse)
            }
        }
    }
}

fn solve(
    obj: Objective,
    set: &WeightedSet<Rotation3>,
    tol: f64,
    max_iter: usize,
) -> Result<MedianResult<Rotation3>> {
    if !(tol > 0.0) {
        return Err(GmError::invalid("tolerance must be > 0"));
    }
    let base = Rotations.distance_fn();
    let start = match obj {
        Objective::Median => medoid(&base, set)?,
        Objective::Mean => medoid(&crate::metric::power_distance(&base, 2)?, set)?,
    };
    let mut r = start.median;
    let mut omega = obj.eval(set, &r);
    let mut history = vec![omega];
    let mut anchor_hits = 0;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        let at_anchor = set
            .objects()
            .iter()
            .any(|ri| angular_distance(&r, ri) < ANCHOR_EPS);
        if at_anchor && obj == Objective::Median {
            anchor_hits += 1;
        }
        let Some(mut step) = direction(obj, set, &r) else {
            converged = true;
            break;
        };
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let candidate = Rotation3::project(r.compose(&Rotation3::exp(&step)).matrix())?;
            let cand_omega = obj.eval(set, &candidate);
            if cand_omega <= omega {
                accepted = Some((candidate, cand_omega));
                break;
            }
            step *= 0.5;
            if step.norm() < tol * 1e-3 {
                break;
            }
        }
        let Some((next, next_omega)) = accepted else {
            // No descent along the step: stationary up to rounding.
            converged = step.norm() < tol;
            break;
        };
        let moved = angular_distance(&r, &next);
        r = next;
        omega = next_omega;
        history.push(omega);
        if moved < tol {
            converged = true;
            break;
        }
    }

    Ok(MedianResult {
        median: r,
        omega,
        iterations,
        converged,
        solver: match obj {
            Objective::Median => "so3-median",
            Objective::Mean => "so3-mean",
        },
        anchor_hits,
        history,
    })
}

/// Minimiser of `Σ wᵢ·θ(R, Rᵢ)`.
pub fn so3_median(
    set: &WeightedSet<Rotation3>,
    tol: f64,
    max_iter: usize,
) -> Result<MedianResult<Rotation3>> {
    solve(Objective::Median, set, tol, max_iter)
}

/// Minimiser of `Σ wᵢ·θ(R, Rᵢ)²` (Karcher mean).
pub fn so3_mean(
    set: &WeightedSet<Rotation3>,
    tol: f64,
    max_iter: usize,
) -> Result<MedianResult<Rotation3>> {
    solve(Objective::Mean, set, tol, max_iter)
}

#[derive(Debug, Clone, Copy)]
pub struct So3Solver {
    pub p: u32,
    pub tol: f64,
    pub max_iter: usize,
}

impl MedianSolver<Rotation3> for So3Solver {
    fn solve(&self, set: &WeightedSet<Rotation3>) -> Result<MedianResult<Rotation3>> {
        match self.p {
            1 => so3_median(set, self.tol, self.max_iter),
            2 => so3_mean(set, self.tol, self.max_iter),
            p => Err(GmError::invalid(format!("SO(3) solvers support p = 1 or 2, got {p}"))),
        }
    }

    fn label(&self) -> &'static str {
        if self.p == 1 {
            "so3-median"
        } else {
            "so3-mean"
        }
    }

    fn power(&self) -> u32 {
        self.p
    }
}
