//! Closed-form medians and means on the real line.

use crate::error::Result;
use crate::metric::WeightedSet;
use crate::solvers::{MedianResult, MedianSolver};

/// Lower weighted median: the smallest value whose cumulative weight reaches
/// half of the total.
pub fn real_line_median(set: &WeightedSet<f64>) -> Result<MedianResult<f64>> {
    let mut order: Vec<usize> = (0..set.len()).collect();
    let values = set.objects();
    let weights = set.weights();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let half = 0.5 * set.total_weight();
    let mut cumulative = 0.0;
    let mut median = values[order[order.len() - 1]];
    for &i in &order {
        cumulative += weights[i];
        if cumulative >= half {
            median = values[i];
            break;
        }
    }
    let omega = set.iter().map(|(v, w)| w * (v - median).abs()).sum();
    Ok(MedianResult::exact(median, omega, 0, "real-median"))
}

/// Weighted arithmetic mean, the minimiser of `Σ wᵢ(x − vᵢ)²`.
pub fn real_line_mean(set: &WeightedSet<f64>) -> Result<MedianResult<f64>> {
    let total = set.total_weight();
    let mean = set.iter().map(|(v, w)| w * v).sum::<f64>() / total;
    let omega = set.iter().map(|(v, w)| w * (v - mean) * (v - mean)).sum();
    Ok(MedianResult::exact(mean, omega, 0, "real-mean"))
}

/// `p = 1` gives the median, `p = 2` the mean.
#[derive(Debug, Clone, Copy)]
pub struct RealLineSolver {
    pub p: u32,
}

impl MedianSolver<f64> for RealLineSolver {
    fn solve(&self, set: &WeightedSet<f64>) -> Result<MedianResult<f64>> {
        match self.p {
            1 => real_line_median(set),
            2 => real_line_mean(set),
            p => Err(crate::GmError::invalid(format!(
                "closed forms on the real line exist for p = 1 or 2, got {p}"
            ))),
        }
    }

    fn label(&self) -> &'static str {
        if self.p == 1 {
            "real-median"
        } else {
            "real-mean"
        }
    }

    fn power(&self) -> u32 {
        self.p
    }
}
