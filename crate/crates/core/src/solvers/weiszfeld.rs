//! Weiszfeld iteration for the weighted geometric median in ℝᵐ.
//!
//! When an iterate lands on a data point (distance below [`ANCHOR_EPS`]) the
//! plain update divides by zero. That point is optimal iff the pull of the
//! remaining points, `‖Σ_{i≠k} wᵢ(pᵢ − x)/‖pᵢ − x‖‖`, does not exceed its own
//! weight; otherwise the Vardi–Zhang modified step moves off it.

use crate::error::{GmError, Result};
use crate::metric::WeightedSet;
use crate::solvers::{MedianResult, MedianSolver};
use crate::spaces::reals::euclidean_distance;

pub const ANCHOR_EPS: f64 = 1e-12;

fn objective(set: &WeightedSet<Vec<f64>>, x: &[f64]) -> f64 {
    set.iter().map(|(p, w)| w * euclidean_distance(p, x)).sum()
}

/// Distance-weighted pull at `x`, split into coincident and free points.
struct Pull {
    anchor_weight: f64,
    weighted_sum: Vec<f64>,
    inverse_sum: f64,
    resultant: Vec<f64>,
}

fn pull(set: &WeightedSet<Vec<f64>>, x: &[f64]) -> Pull {
    let dim = x.len();
    let mut out = Pull {
        anchor_weight: 0.0,
        weighted_sum: vec![0.0; dim],
        inverse_sum: 0.0,
        resultant: vec![0.0; dim],
    };
    for (p, w) in set.iter() {
        let dist = euclidean_distance(p, x);
        if dist < ANCHOR_EPS {
            out.anchor_weight += w;
            continue;
        }
        let scale = w / dist;
        out.inverse_sum += scale;
        for k in 0..dim {
            out.weighted_sum[k] += scale * p[k];
            out.resultant[k] += scale * (p[k] - x[k]);
        }
    }
    out
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Whether data point `x` satisfies the optimality condition.
fn anchor_is_optimal(set: &WeightedSet<Vec<f64>>, x: &[f64]) -> bool {
    let p = pull(set, x);
    p.anchor_weight > 0.0 && norm(&p.resultant) <= p.anchor_weight
}

pub fn weiszfeld(
    set: &WeightedSet<Vec<f64>>,
    tol: f64,
    max_iter: usize,
) -> Result<MedianResult<Vec<f64>>> {
    if !(tol > 0.0) {
        return Err(GmError::invalid("tolerance must be > 0"));
    }
    let dim = set.objects()[0].len();
    if dim == 0 || set.objects().iter().any(|p| p.len() != dim) {
        return Err(GmError::invalid("points must share a non-zero dimension"));
    }

    let total = set.total_weight();
    let mut x: Vec<f64> = (0..dim)
        .map(|k| set.iter().map(|(p, w)| w * p[k]).sum::<f64>() / total)
        .collect();
    let mut omega = objective(set, &x);
    let mut history = vec![omega];
    let mut anchor_hits = 0;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        let p = pull(set, &x);
        let next: Vec<f64> = if p.anchor_weight > 0.0 {
            anchor_hits += 1;
            let r = norm(&p.resultant);
            if r <= p.anchor_weight {
                converged = true;
                break;
            }
            let t = 1.0 - p.anchor_weight / r;
            (0..dim)
                .map(|k| t * p.weighted_sum[k] / p.inverse_sum + (1.0 - t) * x[k])
                .collect()
        } else {
            p.weighted_sum.iter().map(|s| s / p.inverse_sum).collect()
        };
        let step = euclidean_distance(&next, &x);
        let next_omega = objective(set, &next);
        if next_omega > omega {
            // Keep the better point. An increase at rounding level means Ω
            // has reached its floating-point floor.
            converged = step < tol || next_omega - omega <= 1e-12 * omega.max(1.0);
            break;
        }
        x = next;
        omega = next_omega;
        history.push(omega);
        if step < tol {
            converged = true;
            break;
        }
    }

    // A data point meeting the optimality condition is a global minimiser.
    // Iterates approach such points only linearly, so check them directly,
    // nearest first.
    let mut by_distance: Vec<&Vec<f64>> = set.objects().iter().collect();
    by_distance.sort_by(|a, b| euclidean_distance(a, &x).total_cmp(&euclidean_distance(b, &x)));
    if let Some(anchor) = by_distance.into_iter().find(|p| anchor_is_optimal(set, p)) {
        let anchor_omega = objective(set, anchor);
        if anchor_omega <= omega {
            x = anchor.clone();
            omega = anchor_omega;
            history.push(omega);
            converged = true;
        }
    }

    Ok(MedianResult {
        median: x,
        omega,
        iterations,
        converged,
        solver: "weiszfeld",
        anchor_hits,
        history,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct WeiszfeldSolver {
    pub tol: f64,
    pub max_iter: usize,
}

impl MedianSolver<Vec<f64>> for WeiszfeldSolver {
    fn solve(&self, set: &WeightedSet<Vec<f64>>) -> Result<MedianResult<Vec<f64>>> {
        weiszfeld(set, self.tol, self.max_iter)
    }

    fn label(&self) -> &'static str {
        "weiszfeld"
    }

    fn power(&self) -> u32 {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[f64]]) -> WeightedSet<Vec<f64>> {
        WeightedSet::uniform(v.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn one_dimensional_matches_median() {
        let tol = 1e-9;
        let r = weiszfeld(&pts(&[&[0.0], &[1.0], &[10.0]]), tol, 10_000).unwrap();
        assert!(r.converged);
        assert!((r.median[0] - 1.0).abs() <= 10.0 * tol, "{:?}", r.median);
    }

    #[test]
    fn copies_of_one_point() {
        let r = weiszfeld(&pts(&[&[2.0, -1.0] as &[f64]; 4]), 1e-9, 100).unwrap();
        assert_eq!(r.median, vec![2.0, -1.0]);
        assert_eq!(r.omega, 0.0);
        assert!(r.converged);
        assert_eq!(r.anchor_hits, 1);
    }

    #[test]
    fn symmetric_diamond() {
        let tol = 1e-9;
        let set = pts(&[&[0.0, 0.0], &[2.0, 0.0], &[1.0, 1.0], &[1.0, -1.0]]);
        let r = weiszfeld(&set, tol, 10_000).unwrap();
        assert!((r.median[0] - 1.0).abs() <= 10.0 * tol);
        assert!(r.median[1].abs() <= 10.0 * tol);

        // Grid search oracle over [0,2]², step 0.01.
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..=200 {
            for j in 0..=200 {
                let (gx, gy) = (i as f64 * 0.01, -1.0 + j as f64 * 0.01);
                let om = objective(&set, &[gx, gy]);
                if om < best.0 {
                    best = (om, gx, gy);
                }
            }
        }
        assert!((best.1 - 1.0).abs() < 1e-9 && best.2.abs() < 1e-9);
        assert!(r.omega <= best.0 + 1e-12);
    }

    #[test]
    fn starting_on_a_data_point_uses_guard() {
        // Centroid (1, 0) coincides with the middle point, which is not
        // optimal once the other weights dominate.
        let set = WeightedSet::new(
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 3.0], vec![1.0, -3.0]],
            vec![1.0, 0.1, 1.0, 1.0],
        )
        .unwrap();
        let r = weiszfeld(&set, 1e-10, 10_000).unwrap();
        assert!(r.anchor_hits >= 1);
        assert!(r.converged);
        assert!(r.omega < objective(&set, &[1.0, 0.0]));
    }

    #[test]
    fn monotone_history() {
        let set = pts(&[&[0.0, 0.0], &[5.0, 1.0], &[2.0, 7.0], &[-3.0, 4.0], &[9.0, 9.0]]);
        let r = weiszfeld(&set, 1e-12, 10_000).unwrap();
        for w in r.history.windows(2) {
            assert!(w[1] <= w[0] + 1e-12 * w[0].max(1.0));
        }
    }

    #[test]
    fn bad_input() {
        assert!(weiszfeld(&pts(&[&[0.0], &[1.0, 2.0]]), 1e-9, 10).is_err());
        assert!(weiszfeld(&pts(&[&[0.0]]), 0.0, 10).is_err());
    }
}
