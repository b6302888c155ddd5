//! Distance functions, the sum-of-distances objective and metric tooling.
//!
//! [`DistanceFn`] is a cheap, cloneable handle around a pure distance
//! function together with a flag recording whether the function is claimed
//! to be a metric. Everything that transforms distances (powers, kernel
//! metrics, axiom-enforcing transforms, shortest-path closure) produces a new
//! `DistanceFn`, so solvers never need to know where a distance came from.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GmError, Result};
use crate::rng;

type DistClosure<T> = dyn Fn(&T, &T) -> Result<f64> + Send + Sync;

/// A pure distance function `D × D → ℝ` plus a metric claim.
pub struct DistanceFn<T: ?Sized> {
    f: Arc<DistClosure<T>>,
    metric_claim: bool,
    label: Arc<str>,
}

impl<T: ?Sized> Clone for DistanceFn<T> {
    fn clone(&self) -> Self {
        Self {
            f: Arc::clone(&self.f),
            metric_claim: self.metric_claim,
            label: Arc::clone(&self.label),
        }
    }
}

impl<T: ?Sized> fmt::Debug for DistanceFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistanceFn")
            .field("label", &self.label)
            .field("metric_claim", &self.metric_claim)
            .finish()
    }
}

impl<T: ?Sized + 'static> DistanceFn<T> {
    /// Wraps an infallible distance.
    pub fn new<F>(label: &str, metric_claim: bool, f: F) -> Self
    where
        F: Fn(&T, &T) -> f64 + Send + Sync + 'static,
    {
        Self::fallible(label, metric_claim, move |a, b| Ok(f(a, b)))
    }

    /// Wraps a distance that may reject its arguments (length mismatch,
    /// objects outside a finite domain, ...).
    pub fn fallible<F>(label: &str, metric_claim: bool, f: F) -> Self
    where
        F: Fn(&T, &T) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            metric_claim,
            label: Arc::from(label),
        }
    }

    #[inline]
    pub fn eval(&self, a: &T, b: &T) -> Result<f64> {
        (self.f)(a, b)
    }

    pub fn metric_claim(&self) -> bool {
        self.metric_claim
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// A non-empty multi-set with strictly positive weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedSet<T> {
    objects: Vec<T>,
    weights: Vec<f64>,
}

impl<T> WeightedSet<T> {
    pub fn new(objects: Vec<T>, weights: Vec<f64>) -> Result<Self> {
        if objects.is_empty() {
            return Err(GmError::invalid("weighted set must contain at least one object"));
        }
        if objects.len() != weights.len() {
            return Err(GmError::invalid(format!(
                "{} objects but {} weights",
                objects.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(GmError::invalid(format!("weights must be finite and > 0, got {w}")));
        }
        Ok(Self { objects, weights })
    }

    /// All weights equal to one.
    pub fn uniform(objects: Vec<T>) -> Result<Self> {
        let weights = vec![1.0; objects.len()];
        Self::new(objects, weights)
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[T] {
        &self.objects
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, f64)> + '_ {
        self.objects.iter().zip(self.weights.iter().copied())
    }

    /// Same objects, every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self>
    where
        T: Clone,
    {
        Self::new(
            self.objects.clone(),
            self.weights.iter().map(|w| w * factor).collect(),
        )
    }

    pub fn into_parts(self) -> (Vec<T>, Vec<f64>) {
        (self.objects, self.weights)
    }
}

/// `Ω(candidate) = Σ wᵢ · d(candidate, oᵢ)`.
pub fn sum_of_distances<T: ?Sized + 'static, U>(
    d: &DistanceFn<T>,
    candidate: &T,
    set: &WeightedSet<U>,
) -> Result<f64>
where
    U: std::borrow::Borrow<T>,
{
    if set.is_empty() {
        return Err(GmError::invalid("sum of distances over an empty set"));
    }
    let mut total = 0.0;
    for (o, w) in set.iter() {
        total += w * d.eval(candidate, o.borrow())?;
    }
    Ok(total)
}

/// A violation witness: indices into the checked sample plus its size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub indices: [usize; 3],
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricCheckReport {
    pub symmetry_violations: u64,
    pub worst_symmetry: Option<Witness>,
    pub identity_violations: u64,
    pub positivity_violations: u64,
    pub triangle_violations: u64,
    pub worst_triangle: Option<Witness>,
    pub triples_sampled: u64,
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub tolerance: f64,
    pub seed: u64,
}

impl MetricCheckReport {
    pub fn total_violations(&self) -> u64 {
        self.symmetry_violations
            + self.identity_violations
            + self.positivity_violations
            + self.triangle_violations
    }

    pub fn is_clean(&self) -> bool {
        self.total_violations() == 0
    }
}

// Larger margin wins; equal margins go to the lexicographically smaller triple.
fn worse(a: Option<Witness>, b: Option<Witness>) -> Option<Witness> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            if y.margin > x.margin || (y.margin == x.margin && y.indices < x.indices) {
                Some(y)
            } else {
                Some(x)
            }
        }
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    symmetry: u64,
    worst_symmetry: Option<Witness>,
    positivity: u64,
    triangle: u64,
    worst_triangle: Option<Witness>,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            symmetry: self.symmetry + other.symmetry,
            worst_symmetry: worse(self.worst_symmetry, other.worst_symmetry),
            positivity: self.positivity + other.positivity,
            triangle: self.triangle + other.triangle,
            worst_triangle: worse(self.worst_triangle, other.worst_triangle),
        }
    }
}

/// Checks the four metric axioms on `sample`.
///
/// When `n³ ≤ triple_budget` every ordered triple (and every ordered pair) is
/// checked; otherwise `triple_budget` triples are drawn from a stream seeded
/// by `seed` and pairs are taken from the first two slots of those triples.
/// Counts are merged by summation and witnesses by (margin, index) order, so
/// the report does not depend on how rayon partitions the work.
pub fn check_metric_axioms<T>(
    d: &DistanceFn<T>,
    sample: &[T],
    triple_budget: u64,
    tol: f64,
    seed: u64,
) -> Result<MetricCheckReport>
where
    T: PartialEq + Sync + 'static,
{
    let n = sample.len();
    if n == 0 {
        return Err(GmError::invalid("metric check needs a non-empty sample"));
    }
    if triple_budget == 0 {
        return Err(GmError::invalid("triple budget must be at least 1"));
    }
    if !(tol >= 0.0) {
        return Err(GmError::invalid("tolerance must be non-negative"));
    }

    let mut identity_violations = 0;
    for a in sample {
        if d.eval(a, a)?.abs() > tol {
            identity_violations += 1;
        }
    }

    let n64 = n as u64;
    let exhaustive = n64
        .checked_pow(3)
        .is_some_and(|total| total <= triple_budget);

    let triples: Vec<[usize; 3]> = if exhaustive {
        (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| [a, b, c])))
            .collect()
    } else {
        let mut rng = rng::rng_from_seed(seed);
        (0..triple_budget)
            .map(|_| {
                [
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                ]
            })
            .collect()
    };

    let check_pair = |a: usize, b: usize, tally: &mut Tally| -> Result<()> {
        if a == b {
            return Ok(());
        }
        let ab = d.eval(&sample[a], &sample[b])?;
        let ba = d.eval(&sample[b], &sample[a])?;
        let asym = (ab - ba).abs();
        if asym > tol {
            tally.symmetry += 1;
            tally.worst_symmetry = worse(
                tally.worst_symmetry,
                Some(Witness {
                    indices: [a, b, b],
                    margin: asym,
                }),
            );
        }
        if sample[a] != sample[b] && ab <= tol {
            tally.positivity += 1;
        }
        Ok(())
    };

    let pair_tally = if exhaustive {
        let mut t = Tally::default();
        for a in 0..n {
            for b in 0..n {
                check_pair(a, b, &mut t)?;
            }
        }
        t
    } else {
        Tally::default()
    };
    let pairs_checked = if exhaustive { n64 * (n64 - 1) } else { triple_budget };

    let triple_tally = triples
        .par_iter()
        .try_fold(Tally::default, |mut t, &[a, b, c]| -> Result<Tally> {
            if !exhaustive {
                check_pair(a, b, &mut t)?;
            }
            let ac = d.eval(&sample[a], &sample[c])?;
            let ab = d.eval(&sample[a], &sample[b])?;
            let bc = d.eval(&sample[b], &sample[c])?;
            let margin = ac - (ab + bc);
            if margin > tol {
                t.triangle += 1;
                t.worst_triangle = worse(
                    t.worst_triangle,
                    Some(Witness {
                        indices: [a, b, c],
                        margin,
                    }),
                );
            }
            Ok(t)
        })
        .try_reduce(Tally::default, |x, y| Ok(x.merge(y)))?;

    let total = pair_tally.merge(triple_tally);
    Ok(MetricCheckReport {
        symmetry_violations: total.symmetry,
        worst_symmetry: total.worst_symmetry,
        identity_violations,
        positivity_violations: total.positivity,
        triangle_violations: total.triangle,
        worst_triangle: total.worst_triangle,
        triples_sampled: triples.len() as u64,
        pairs_checked,
        exhaustive,
        tolerance: tol,
        seed,
    })
}

/// `x, y ↦ d(x, y)^p` for integer `p ≥ 2`. Never a metric once `d` admits a
/// single exact weighted-mean triple.
pub fn power_distance<T: ?Sized + 'static>(d: &DistanceFn<T>, p: u32) -> Result<DistanceFn<T>> {
    if p < 2 {
        return Err(GmError::invalid(format!("power must be >= 2, got {p}")));
    }
    let inner = d.clone();
    let label = format!("{}^{}", d.label(), p);
    Ok(DistanceFn::fallible(&label, false, move |a, b| {
        Ok(inner.eval(a, b)?.powi(p as i32))
    }))
}

/// Relative clamp threshold for negative kernel radicands.
pub const KERNEL_CLAMP_TOL: f64 = 1e-12;

/// Metric induced by a positive definite kernel:
/// `√(k(x,x) − 2k(x,y) + k(y,y))`.
///
/// Radicands in `[−1e−12·scale, 0)` are treated as rounding and clamped to
/// zero, where `scale = max(1, |k(x,x)|, |k(x,y)|, |k(y,y)|)`. Anything more
/// negative evaluates to [`GmError::NotPositiveDefinite`].
pub fn kernel_induced_metric<T, K>(k: K) -> DistanceFn<T>
where
    T: ?Sized + 'static,
    K: Fn(&T, &T) -> f64 + Send + Sync + 'static,
{
    DistanceFn::fallible("kernel", true, move |x, y| {
        let kxx = k(x, x);
        let kyy = k(y, y);
        let kxy = k(x, y);
        let radicand = kxx - 2.0 * kxy + kyy;
        let scale = 1f64.max(kxx.abs()).max(kyy.abs()).max(kxy.abs());
        if radicand >= 0.0 {
            Ok(radicand.sqrt())
        } else if radicand >= -KERNEL_CLAMP_TOL * scale {
            Ok(0.0)
        } else {
            Err(GmError::NotPositiveDefinite { radicand })
        }
    })
}

/// Which axiom-enforcing transforms to apply.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AxiomFixes {
    pub zero_self: bool,
    pub symmetry: bool,
    /// Offset `c > 0` added to every off-diagonal value.
    pub positivity: Option<f64>,
}

/// Forces an arbitrary function towards the metric axioms.
///
/// Transforms are applied in the order zero-self, symmetry, positivity:
///
/// - zero-self: `f(a,b) − ½(f(a,a) + f(b,b))`
/// - symmetry: `½(f(a,b) + f(b,a))`
/// - positivity: `0` if `a = b`, else `|f(a,b)| + c`
///
/// The triangle inequality is not enforced, so the result never claims to be
/// a metric. See [`shortest_path_metric`] for finite domains.
pub fn enforce_axioms<T, F>(f: F, fixes: AxiomFixes) -> Result<DistanceFn<T>>
where
    T: PartialEq + 'static,
    F: Fn(&T, &T) -> f64 + Send + Sync + 'static,
{
    if let Some(c) = fixes.positivity {
        if !(c > 0.0) {
            return Err(GmError::invalid(format!("positivity offset must be > 0, got {c}")));
        }
    }
    let zero_self = move |a: &T, b: &T| -> f64 {
        if fixes.zero_self {
            f(a, b) - 0.5 * (f(a, a) + f(b, b))
        } else {
            f(a, b)
        }
    };
    let symmetric = move |a: &T, b: &T| -> f64 {
        if fixes.symmetry {
            0.5 * (zero_self(a, b) + zero_self(b, a))
        } else {
            zero_self(a, b)
        }
    };
    Ok(DistanceFn::new("enforced", false, move |a: &T, b: &T| {
        match fixes.positivity {
            Some(_) if a == b => 0.0,
            Some(c) => symmetric(a, b).abs() + c,
            None => symmetric(a, b),
        }
    }))
}

/// Shortest-path closure of a distance over a finite object list, stored as a
/// dense index-keyed table.
#[derive(Debug, Clone)]
pub struct FiniteMetric<T> {
    objects: Vec<T>,
    table: Vec<f64>,
}

impl<T> FiniteMetric<T> {
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[T] {
        &self.objects
    }

    /// Distance between the objects at positions `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.table[i * self.objects.len() + j]
    }

    /// The closure as a distance on object indices.
    pub fn index_distance(&self) -> DistanceFn<usize> {
        let n = self.objects.len();
        let table: Arc<[f64]> = Arc::from(self.table.as_slice());
        DistanceFn::fallible("shortest-path", true, move |&i, &j| {
            if i >= n || j >= n {
                return Err(GmError::invalid(format!("index out of range for {n} objects")));
            }
            Ok(table[i * n + j])
        })
    }

    /// The closure as a distance on the objects themselves; objects outside
    /// the finite domain are rejected.
    pub fn object_distance(&self) -> DistanceFn<T>
    where
        T: Clone + PartialEq + Send + Sync + 'static,
    {
        let n = self.objects.len();
        let objects: Arc<[T]> = Arc::from(self.objects.clone());
        let table: Arc<[f64]> = Arc::from(self.table.as_slice());
        DistanceFn::fallible("shortest-path", true, move |a, b| {
            let find = |x: &T| {
                objects
                    .iter()
                    .position(|o| o == x)
                    .ok_or_else(|| GmError::invalid("object outside the finite domain"))
            };
            Ok(table[find(a)? * n + find(b)?])
        })
    }
}

/// All-pairs shortest-path closure of `f` over the complete graph on
/// `objects`.
///
/// `f` must vanish on the diagonal, be symmetric and strictly positive off
/// the diagonal. Floyd–Warshall passes repeat until a pass changes nothing,
/// which makes `d(i,k) ≤ d(i,j) + d(j,k)` hold exactly in floating point.
pub fn shortest_path_metric<T>(objects: &[T], f: &DistanceFn<T>) -> Result<FiniteMetric<T>>
where
    T: Clone + PartialEq + 'static,
{
    let n = objects.len();
    if n == 0 {
        return Err(GmError::invalid("shortest-path metric needs at least one object"));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if objects[i] == objects[j] {
                return Err(GmError::invalid(format!("objects {i} and {j} are equal")));
            }
        }
    }

    let mut table = vec![0.0; n * n];
    for i in 0..n {
        let self_d = f.eval(&objects[i], &objects[i])?;
        if self_d != 0.0 {
            return Err(GmError::invalid(format!("f(o{i}, o{i}) = {self_d}, expected 0")));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let v = f.eval(&objects[i], &objects[j])?;
            if !(v > 0.0) || !v.is_finite() {
                return Err(GmError::invalid(format!(
                    "f(o{i}, o{j}) = {v}, expected a finite positive value"
                )));
            }
            table[i * n + j] = v;
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if table[i * n + j] != table[j * n + i] {
                return Err(GmError::invalid(format!("f is not symmetric on ({i}, {j})")));
            }
        }
    }

    loop {
        let mut changed = false;
        for via in 0..n {
            for i in 0..n {
                let d_iv = table[i * n + via];
                for j in 0..n {
                    let candidate = d_iv + table[via * n + j];
                    if candidate < table[i * n + j] {
                        table[i * n + j] = candidate;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    Ok(FiniteMetric {
        objects: objects.to_vec(),
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs_diff() -> DistanceFn<f64> {
        DistanceFn::new("abs", true, |a: &f64, b: &f64| (a - b).abs())
    }

    #[test]
    fn weighted_set_rejects_bad_input() {
        assert!(WeightedSet::<f64>::uniform(vec![]).is_err());
        assert!(WeightedSet::new(vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(WeightedSet::new(vec![1.0], vec![0.0]).is_err());
        assert!(WeightedSet::new(vec![1.0], vec![-1.0]).is_err());
        assert!(WeightedSet::new(vec![1.0], vec![f64::NAN]).is_err());
    }

    #[test]
    fn sum_of_distances_singleton_is_zero() {
        let set = WeightedSet::uniform(vec![3.5]).unwrap();
        assert_eq!(sum_of_distances(&abs_diff(), &3.5, &set).unwrap(), 0.0);
    }

    #[test]
    fn sum_of_distances_is_linear_in_weights() {
        let set = WeightedSet::new(vec![0.0, 1.0, 10.0], vec![1.0, 2.0, 0.5]).unwrap();
        let base = sum_of_distances(&abs_diff(), &2.0, &set).unwrap();
        let scaled = sum_of_distances(&abs_diff(), &2.0, &set.scaled(3.0).unwrap()).unwrap();
        assert!((scaled - 3.0 * base).abs() < 1e-12);
    }

    #[test]
    fn abs_is_clean_and_square_is_not() {
        let sample: Vec<f64> = vec![-2.0, 0.0, 0.5, 1.0, 2.0, 7.25];
        let rep = check_metric_axioms(&abs_diff(), &sample, 1_000, 1e-9, 1).unwrap();
        assert!(rep.exhaustive);
        assert!(rep.is_clean(), "{rep:?}");

        let sq = power_distance(&abs_diff(), 2).unwrap();
        let rep = check_metric_axioms(&sq, &[0.0, 1.0, 2.0], 27, 1e-9, 1).unwrap();
        assert!(rep.triangle_violations >= 1);
        let w = rep.worst_triangle.unwrap();
        // 4 > 1 + 1 on (0, 1, 2), the lexicographically first worst triple.
        assert_eq!(w.indices, [0, 1, 2]);
        assert_eq!(w.margin, 2.0);
    }

    #[test]
    fn metric_check_rejects_bad_arguments() {
        assert!(check_metric_axioms(&abs_diff(), &[] as &[f64], 10, 0.0, 0).is_err());
        assert!(check_metric_axioms(&abs_diff(), &[0.0, 1.0], 10, 0.0, 0).unwrap().is_clean());
        assert!(check_metric_axioms(&abs_diff(), &[0.0, 1.0, 2.0], 0, 0.0, 0).is_err());
    }

    #[test]
    fn sampled_check_is_reproducible() {
        let sq = power_distance(&abs_diff(), 2).unwrap();
        let sample: Vec<f64> = (0..40).map(|i| i as f64 * 0.37).collect();
        let a = check_metric_axioms(&sq, &sample, 5_000, 1e-9, 99).unwrap();
        let b = check_metric_axioms(&sq, &sample, 5_000, 1e-9, 99).unwrap();
        assert!(!a.exhaustive);
        assert_eq!(a, b);
        assert!(a.triangle_violations > 0);
    }

    #[test]
    fn asymmetric_and_degenerate_functions_are_flagged() {
        let skew = DistanceFn::new("skew", false, |a: &f64, b: &f64| {
            if a < b {
                2.0 * (b - a)
            } else {
                a - b
            }
        });
        let rep = check_metric_axioms(&skew, &[0.0, 1.0, 3.0], 27, 1e-9, 0).unwrap();
        assert_eq!(rep.symmetry_violations, 6);
        assert_eq!(rep.worst_symmetry.unwrap().margin, 3.0);

        let constant = DistanceFn::new("zero", false, |_: &f64, _: &f64| 0.0);
        let rep = check_metric_axioms(&constant, &[0.0, 1.0, 3.0], 27, 0.0, 0).unwrap();
        assert_eq!(rep.positivity_violations, 6);

        let shifted = DistanceFn::new("shift", false, |a: &f64, b: &f64| (a - b).abs() + 1.0);
        let rep = check_metric_axioms(&shifted, &[0.0, 1.0, 3.0], 27, 0.0, 0).unwrap();
        assert_eq!(rep.identity_violations, 3);
    }

    #[test]
    fn power_distance_values() {
        let sq = power_distance(&abs_diff(), 2).unwrap();
        assert_eq!(sq.eval(&0.0, &3.0).unwrap(), 9.0);
        assert!(!sq.metric_claim());
        assert!(power_distance(&abs_diff(), 1).is_err());
        assert!(power_distance(&abs_diff(), 0).is_err());
    }

    #[test]
    fn kernel_metric_from_dot_product_is_euclidean() {
        let d = kernel_induced_metric(|a: &[f64; 2], b: &[f64; 2]| a[0] * b[0] + a[1] * b[1]);
        assert_eq!(d.eval(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(d.eval(&[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
    }

    #[test]
    fn kernel_metric_polynomial_kernel() {
        // (1 + xy)^2 has the explicit feature map (1, √2·x, x²).
        let k = |a: &f64, b: &f64| (1.0 + a * b).powi(2);
        let d = kernel_induced_metric(k);
        let phi = |x: f64| [1.0, 2f64.sqrt() * x, x * x];
        let (p0, p1) = (phi(0.0), phi(1.0));
        let embedded = p0
            .iter()
            .zip(&p1)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let v = d.eval(&0.0, &1.0).unwrap();
        // k(0,0) − 2k(0,1) + k(1,1) = 1 − 2 + 4
        assert!((v - 3f64.sqrt()).abs() < 1e-15);
        assert!((v - embedded).abs() < 1e-12);
    }

    #[test]
    fn kernel_metric_rejects_indefinite_kernel() {
        let d = kernel_induced_metric(|a: &f64, b: &f64| -a * b);
        assert!(matches!(
            d.eval(&1.0, &2.0),
            Err(GmError::NotPositiveDefinite { .. })
        ));
        // Tiny negative radicands from rounding are clamped.
        let tiny = kernel_induced_metric(|a: &f64, b: &f64| if a == b { 1.0 } else { 1.0 + 1e-14 });
        assert_eq!(tiny.eval(&1.0, &2.0).unwrap(), 0.0);
    }

    #[test]
    fn enforce_axioms_examples() {
        let sym = enforce_axioms(
            |a: &f64, b: &f64| a - b,
            AxiomFixes {
                symmetry: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(sym.eval(&1.0, &4.0).unwrap(), 0.0);

        let zs = enforce_axioms(
            |a: &f64, b: &f64| a * b,
            AxiomFixes {
                zero_self: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(zs.eval(&2.0, &3.0).unwrap(), -0.5);

        let pos = enforce_axioms(
            |a: &f64, b: &f64| a * b - 7.0,
            AxiomFixes {
                positivity: Some(0.1),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(pos.eval(&2.0, &2.0).unwrap(), 0.0);
        assert!((pos.eval(&1.0, &2.0).unwrap() - 5.1).abs() < 1e-12);

        assert!(enforce_axioms(
            |a: &f64, b: &f64| a - b,
            AxiomFixes {
                positivity: Some(0.0),
                ..Default::default()
            }
        )
        .is_err());
    }

    #[test]
    fn enforce_axioms_composition_order() {
        // zero-self, then symmetry, then positivity.
        let f = |a: &f64, b: &f64| 3.0 * a - b + a * a;
        let all = enforce_axioms(
            f,
            AxiomFixes {
                zero_self: true,
                symmetry: true,
                positivity: Some(0.25),
            },
        )
        .unwrap();
        let (a, b) = (1.0, 2.0);
        let z = |x: f64, y: f64| f(&x, &y) - 0.5 * (f(&x, &x) + f(&y, &y));
        let s = 0.5 * (z(a, b) + z(b, a));
        assert!((all.eval(&a, &b).unwrap() - (s.abs() + 0.25)).abs() < 1e-12);
        assert_eq!(all.eval(&a, &b).unwrap(), all.eval(&b, &a).unwrap());
    }

    #[test]
    fn shortest_path_shortcuts_long_edge() {
        let objs = vec!['a', 'b', 'c'];
        let f = DistanceFn::new("toy", false, |x: &char, y: &char| {
            let key = if x < y { (*x, *y) } else { (*y, *x) };
            match key {
                (a, b) if a == b => 0.0,
                ('a', 'b') | ('b', 'c') => 1.0,
                ('a', 'c') => 5.0,
                _ => unreachable!(),
            }
        });
        let m = shortest_path_metric(&objs, &f).unwrap();
        assert_eq!(m.distance(0, 2), 2.0);
        assert_eq!(m.object_distance().eval(&'c', &'a').unwrap(), 2.0);
        assert_eq!(m.index_distance().eval(&0, &1).unwrap(), 1.0);
        assert!(m.object_distance().eval(&'z', &'a').is_err());
    }

    #[test]
    fn shortest_path_of_metric_is_identity() {
        let objs: Vec<f64> = vec![0.0, 1.5, 4.0, -3.0, 10.0];
        let m = shortest_path_metric(&objs, &abs_diff()).unwrap();
        for i in 0..objs.len() {
            for j in 0..objs.len() {
                assert_eq!(m.distance(i, j), (objs[i] - objs[j]).abs());
            }
        }
    }

    #[test]
    fn shortest_path_preconditions() {
        let sq = power_distance(&abs_diff(), 2).unwrap();
        assert!(shortest_path_metric(&[1.0, 1.0], &sq).is_err());
        let asym = DistanceFn::new("a", false, |a: &f64, b: &f64| {
            if a < b {
                1.0
            } else if a > b {
                2.0
            } else {
                0.0
            }
        });
        assert!(shortest_path_metric(&[0.0, 1.0], &asym).is_err());
        let self_nonzero = DistanceFn::new("s", false, |_: &f64, _: &f64| 1.0);
        assert!(shortest_path_metric(&[0.0, 1.0], &self_nonzero).is_err());
    }
}
