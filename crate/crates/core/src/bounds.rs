//! Closed-form displacement and breakdown bounds for metric generalized
//! medians.
//!
//! Notation: `O` is the original multi-set of `n` objects with median `ō`,
//! `Q` the corrupted set with median `q̄`, `k` the number of added or
//! replaced objects and `X = O ∩ Q` the survivors of a replacement.
//!
//! | function | corruption | bound on |
//! |---|---|---|
//! | [`thm1_bound`] | replace `k ≤ ⌊(n−1)/2⌋` | `δ(ō,q̄) ≤ ⌊(n+1)/2⌋(2R + c)` |
//! | [`thm2_added_bound`] | add `k < n` | `δ(ō,q̄) ≤ 2Ω_O(ō)/(n−k)` |
//! | [`thm3_replaced_bound`] | replace `k ≤ ⌊(n−1)/2⌋` | `δ(ō,q̄) ≤ 4Ω_X(x̄)/(n−2k)` |
//! | [`thm4_sod_bound`] | add `k < n` | `Ω_Q(ō) − Ω_Q(q̄) ≤ 2kΩ_O(ō)/(n−k)` |
//! | [`thm5_weighted_added_bound`] | add, `W_P < W_O` | `δ ≤ 2Ω_O/(W_O − W_P)` |
//! | [`thm6_weighted_replaced_bound`] | replace, `W_P < W_X` | `δ ≤ 4Ω_X/(W_X − W_P)` |
//!
//! `R` is the largest distance from `ō` to an object of `O` and `c` bounds
//! the gap between neighbouring objects across the `2R` ball (`0` in
//! continuous spaces, `1` for Kendall-tau).
//!
//! An inapplicable bound is reported with value `+∞` and the failed
//! precondition, never as an error, so sweeps over `k` stay uniform.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{GmError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    Thm5,
    Thm6,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::Thm1 => "thm1",
            Theorem::Thm2 => "thm2",
            Theorem::Thm3 => "thm3",
            Theorem::Thm4 => "thm4",
            Theorem::Thm5 => "thm5",
            Theorem::Thm6 => "thm6",
        }
    }
}

fn finite_or_null<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem: Theorem,
    /// `+∞` exactly when the bound is inapplicable (serialized as `null`).
    #[serde(serialize_with = "finite_or_null")]
    pub value: f64,
    pub applicable: bool,
    pub precondition_note: String,
}

impl BoundReport {
    fn ok(theorem: Theorem, value: f64, note: impl Into<String>) -> Self {
        Self {
            theorem,
            value,
            applicable: true,
            precondition_note: note.into(),
        }
    }

    fn inapplicable(theorem: Theorem, note: impl Into<String>) -> Self {
        Self {
            theorem,
            value: f64::INFINITY,
            applicable: false,
            precondition_note: note.into(),
        }
    }

    /// `Some(value)` when applicable.
    pub fn finite(&self) -> Option<f64> {
        self.applicable.then_some(self.value)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(GmError::invalid("n must be >= 1"));
    }
    Ok(())
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(GmError::invalid(format!("{name} must be finite and >= 0, got {v}")));
    }
    Ok(())
}

fn check_weights(name: &str, ws: &[f64]) -> Result<f64> {
    if let Some(w) = ws.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(GmError::invalid(format!("{name} weights must be > 0, got {w}")));
    }
    Ok(ws.iter().sum())
}

/// Largest number of replacements covered by the replacement bounds.
pub fn max_replacements(n: usize) -> usize {
    n.saturating_sub(1) / 2
}

/// `⌊(n+1)/2⌋ / n`, the guaranteed breakdown point of a metric median.
pub fn breakdown_floor(n: usize) -> Result<Ratio<u64>> {
    check_n(n)?;
    Ok(Ratio::new_raw((n as u64).div_ceil(2), n as u64))
}

/// Displacement bound `⌊(n+1)/2⌋·(2R + c)` for up to `⌊(n−1)/2⌋`
/// replacements.
pub fn thm1_bound(n: usize, radius: f64, c: f64) -> Result<BoundReport> {
    check_n(n)?;
    check_nonneg("R", radius)?;
    check_nonneg("c", c)?;
    let factor = n.div_ceil(2) as f64;
    Ok(BoundReport::ok(
        Theorem::Thm1,
        factor * (2.0 * radius + c),
        format!("valid for k <= {}", max_replacements(n)),
    ))
}

/// [`thm1_bound`] with the replacement count checked.
pub fn thm1_bound_for(n: usize, k: usize, radius: f64, c: f64) -> Result<BoundReport> {
    let report = thm1_bound(n, radius, c)?;
    if k > max_replacements(n) {
        return Ok(BoundReport::inapplicable(
            Theorem::Thm1,
            format!("k = {k} exceeds floor((n-1)/2) = {}", max_replacements(n)),
        ));
    }
    Ok(report)
}

pub fn thm2_added_bound(n: usize, k: usize, omega_o: f64) -> Result<BoundReport> {
    check_n(n)?;
    check_nonneg("omega", omega_o)?;
    if k >= n {
        return Ok(BoundReport::inapplicable(
            Theorem::Thm2,
            format!("needs k < n, got k = {k}, n = {n}"),
        ));
    }
    Ok(BoundReport::ok(
        Theorem::Thm2,
        2.0 * omega_o / (n - k) as f64,
        "k < n",
    ))
}

pub fn thm3_replaced_bound(n: usize, k: usize, omega_x: f64) -> Result<BoundReport> {
    check_n(n)?;
    check_nonneg("omega", omega_x)?;
    if k > max_replacements(n) {
        return Ok(BoundReport::inapplicable(
            Theorem::Thm3,
            format!("needs k <= floor((n-1)/2) = {}, got k = {k}", max_replacements(n)),
        ));
    }
    Ok(BoundReport::ok(
        Theorem::Thm3,
        4.0 * omega_x / (n - 2 * k) as f64,
        "k <= floor((n-1)/2)",
    ))
}

/// Bound on the sum-of-distance gap `Ω_Q(ō) − Ω_Q(q̄)` after adding `k`.
pub fn thm4_sod_bound(n: usize, k: usize, omega_o: f64) -> Result<BoundReport> {
    check_n(n)?;
    check_nonneg("omega", omega_o)?;
    if k >= n {
        return Ok(BoundReport::inapplicable(
            Theorem::Thm4,
            format!("needs k < n, got k = {k}, n = {n}"),
        ));
    }
    Ok(BoundReport::ok(
        Theorem::Thm4,
        2.0 * k as f64 * omega_o / (n - k) as f64,
        "k < n",
    ))
}

pub fn thm5_weighted_added_bound(
    weights_o: &[f64],
    weights_p: &[f64],
    omega_w_o: f64,
) -> Result<BoundReport> {
    if weights_o.is_empty() {
        return Err(GmError::invalid("original weights must not be empty"));
    }
    let w_o = check_weights("original", weights_o)?;
    let w_p = check_weights("added", weights_p)?;
    check_nonneg("omega", omega_w_o)?;
    if !(w_o > w_p) {
        return Ok(BoundReport::inapplicable(
            Theorem::Thm5,
            format!("needs W_O > W_P, got W_O = {w_o}, W_P = {w_p}"),
        ));
    }
    Ok(BoundReport::ok(
        Theorem::Thm5,
        2.0 * omega_w_o / (w_o - w_p),
        "W_O > W_P",
    ))
}

pub fn thm6_weighted_replaced_bound(
    weights_x: &[f64],
    weights_p: &[f64],
    omega_w_x: f64,
) -> Result<BoundReport> {
    if weights_x.is_empty() {
        return Err(GmError::invalid("survivor weights must not be empty"));
    }
    let w_x = check_weights("survivor", weights_x)?;
    let w_p = check_weights("replaced", weights_p)?;
    check_nonneg("omega", omega_w_x)?;
    if !(w_x > w_p) {
        return Ok(BoundReport::inapplicable(
            Theorem::Thm6,
            format!("needs W_X > W_P, got W_X = {w_x}, W_P = {w_p}"),
        ));
    }
    Ok(BoundReport::ok(
        Theorem::Thm6,
        4.0 * omega_w_x / (w_x - w_p),
        "W_X > W_P",
    ))
}

/// Largest `k` such that the `k` heaviest weights sum to strictly less than
/// the rest.
pub fn weighted_breakdown_count(weights: &[f64]) -> Result<usize> {
    if weights.is_empty() {
        return Err(GmError::invalid("weights must not be empty"));
    }
    check_weights("", weights)?;
    let mut sorted = weights.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    // rest[i] = Σ sorted[i..], accumulated from the light end so equal
    // weights give bit-identical prefix and suffix sums.
    let mut rest = vec![0.0; sorted.len() + 1];
    for i in (0..sorted.len()).rev() {
        rest[i] = rest[i + 1] + sorted[i];
    }
    let mut heaviest = 0.0;
    let mut k = 0;
    for (i, w) in sorted.iter().enumerate() {
        heaviest += w;
        if heaviest < rest[i + 1] {
            k = i + 1;
        } else {
            break;
        }
    }
    Ok(k)
}

/// `k/n` for [`weighted_breakdown_count`]; not reduced, so `k` and `n` stay
/// visible.
pub fn weighted_breakdown_estimate(weights: &[f64]) -> Result<Ratio<u64>> {
    let k = weighted_breakdown_count(weights)?;
    Ok(Ratio::new_raw(k as u64, weights.len() as u64))
}

/// Exact distance `a* = d / ((n−1)^{1/(p−1)} + 1)` the `d^p` median moves
/// toward one outlier at distance `d` from `n − 1` identical inliers.
pub fn nonmetric_pull(d: f64, n: usize, p: u32) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(GmError::invalid(format!("d must be finite and > 0, got {d}")));
    }
    if n < 2 {
        return Err(GmError::invalid("n must be >= 2"));
    }
    if p < 2 {
        return Err(GmError::invalid("p must be >= 2"));
    }
    let root = ((n - 1) as f64).powf(1.0 / (p - 1) as f64);
    Ok(d / (root + 1.0))
}

/// The 1-D configuration on which the added-object bound is nearly tight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessExample {
    pub n1: usize,
    pub n2: usize,
    pub k: usize,
    pub d: f64,
    /// `n1` zeros followed by `n2` copies of `d`.
    pub original: Vec<f64>,
    /// `k` outliers far beyond `d`.
    pub outliers: Vec<f64>,
    pub bound: f64,
    pub actual: f64,
    /// `bound / actual = 2n₂ / (2n₂ − 1)`, exact.
    pub ratio: Ratio<u64>,
}

/// Builds `O = {0 × n1, d × n2}` and `P = {far × k}` with `k = n1 − n2 + 1`.
/// The median moves from `0` to `d`; the added-object bound evaluates to
/// `2n₂d / (2n₂ − 1)`.
pub fn tightness_example(n1: usize, n2: usize, k: usize, d: f64) -> Result<TightnessExample> {
    if n2 < 1 || n1 <= n2 {
        return Err(GmError::invalid(format!("needs n1 > n2 >= 1, got n1 = {n1}, n2 = {n2}")));
    }
    if k != n1 - n2 + 1 {
        return Err(GmError::invalid(format!("needs k = n1 - n2 + 1 = {}, got {k}", n1 - n2 + 1)));
    }
    if !(d > 0.0) || !d.is_finite() {
        return Err(GmError::invalid(format!("d must be finite and > 0, got {d}")));
    }
    let n = n1 + n2;
    let omega_o = n2 as f64 * d;
    let bound = thm2_added_bound(n, k, omega_o)?.value;
    let far = d * (n as f64 + 10.0) * 100.0;
    let mut original = vec![0.0; n1];
    original.extend(std::iter::repeat_n(d, n2));
    Ok(TightnessExample {
        n1,
        n2,
        k,
        d,
        original,
        outliers: (1..=k).map(|i| far + i as f64 * d).collect(),
        bound,
        actual: d,
        ratio: Ratio::new(2 * n2 as u64, 2 * n2 as u64 - 1),
    })
}
