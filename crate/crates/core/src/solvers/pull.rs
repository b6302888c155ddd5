use crate::error::{GmError, Result};
use crate::spaces::Space;

/// Empirical pull of the `d^p` median toward a single outlier.
///
/// The set is `n − 1` copies of `x` plus one `y`. Its `d^p` median is a
/// weighted mean of `x` and `y`, so the objective
/// `(n − 1)·d(x,h)^p + d(h,y)^p` is scanned over `h = wm(x, y, i/grid)`,
/// `i = 0..=grid`. Returns `d(x, h*)` for the first minimising `h*`.
pub fn nonmetric_pull_empirical<S: Space>(
    space: &S,
    x: &S::Object,
    y: &S::Object,
    n: usize,
    p: u32,
    grid: usize,
) -> Result<f64> {
    if n < 2 {
        return Err(GmError::invalid("pull needs n >= 2"));
    }
    if p < 2 {
        return Err(GmError::invalid("pull needs p >= 2"));
    }
    if grid < 10 {
        return Err(GmError::invalid("grid must have at least 10 steps"));
    }
    let inliers = (n - 1) as f64;
    let mut best: Option<(f64, S::Object)> = None;
    for i in 0..=grid {
        let h = space.weighted_mean(x, y, i as f64 / grid as f64)?;
        let omega = inliers * space.distance(x, &h)?.powi(p as i32)
            + space.distance(&h, y)?.powi(p as i32);
        if best.as_ref().is_none_or(|(b, _)| omega < *b) {
            best = Some((omega, h));
        }
    }
    let (_, h) = best.expect("grid is non-empty");
    space.distance(x, &h)
}
