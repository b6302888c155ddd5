use crate::error::{GmError, Result};
use crate::spaces::{check_weight, Space};

/// Integers in `[lo, hi]` with `|x − y|`. The bounds only limit enumeration;
/// the distance accepts any pair.
#[derive(Debug, Clone, Copy)]
pub struct Integers {
    pub lo: i64,
    pub hi: i64,
}

impl Integers {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(GmError::invalid(format!("empty integer range [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }
}

impl Space for Integers {
    type Object = i64;

    fn name(&self) -> &'static str {
        "integer"
    }

    fn distance(&self, a: &i64, b: &i64) -> Result<f64> {
        Ok(a.abs_diff(*b) as f64)
    }

    /// Exists only when `w·|z − x|` is an integer (within 1e−9): the path
    /// from `x` to `z` is sampled at unit steps.
    fn weighted_mean(&self, x: &i64, z: &i64, w: f64) -> Result<i64> {
        check_weight(w)?;
        let span = (z - x) as f64;
        let offset = w * span;
        let rounded = offset.round();
        if (offset - rounded).abs() > 1e-9 {
            return Err(GmError::invalid(format!(
                "no integer weighted mean of {x} and {z} at w = {w}"
            )));
        }
        Ok(x + rounded as i64)
    }

    fn candidate_count(&self) -> Option<u64> {
        Some(self.hi.abs_diff(self.lo) + 1)
    }

    fn enumerate(&self) -> Result<Box<dyn Iterator<Item = i64> + '_>> {
        Ok(Box::new(self.lo..=self.hi))
    }
}

/// Integers with `(x − y)²` inside `S₁ = [−c, c]` and `|x − y|` otherwise.
/// Not a metric (the square breaks the triangle inequality inside `S₁`), yet
/// the median stays robust because `S₁` is finite.
#[derive(Debug, Clone, Copy)]
pub struct HybridIntDistance {
    pub c: i64,
}

impl HybridIntDistance {
    pub fn new(c: i64) -> Result<Self> {
        if c < 1 {
            return Err(GmError::invalid(format!("threshold c must be >= 1, got {c}")));
        }
        Ok(Self { c })
    }

    pub fn in_core(&self, x: i64) -> bool {
        (-self.c..=self.c).contains(&x)
    }
}

pub fn hybrid_int_distance(h: &HybridIntDistance, x: i64, y: i64) -> f64 {
    let diff = x.abs_diff(y) as f64;
    if h.in_core(x) && h.in_core(y) {
        diff * diff
    } else {
        diff
    }
}

impl Space for HybridIntDistance {
    type Object = i64;

    fn name(&self) -> &'static str {
        "hybrid-integer"
    }

    fn is_metric(&self) -> bool {
        false
    }

    fn distance(&self, a: &i64, b: &i64) -> Result<f64> {
        Ok(hybrid_int_distance(self, *a, *b))
    }
}
