//! Solvers and distances checked against independently coded references.

use gmedian_core::metric::sum_of_distances;
use gmedian_core::rng::rng_from_seed;
use gmedian_core::solvers::{
    exhaustive_median, medoid, real_line_median, so3_mean, so3_median, weiszfeld, MedianSolver,
    RankingMedianSolver, DEFAULT_CANDIDATE_CAP,
};
use gmedian_core::spaces::generators::random_ranking;
use gmedian_core::spaces::{
    angular_distance, Euclidean, Integers, Ranking, Rankings, RealLine, Rotation3, Rotations, Space,
};
use gmedian_core::WeightedSet;
use nalgebra::Matrix3;
use rand::Rng;

// ---------- rankings ----------

/// All permutations of 1..=m by Heap's algorithm (different order from the
/// crate's lexicographic enumeration).
fn heap_permutations(m: usize) -> Vec<Vec<u32>> {
    let mut a: Vec<u32> = (1..=m as u32).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; m];
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Kendall-tau via item positions: count item pairs ordered differently.
fn kendall_by_items(a: &[u32], b: &[u32]) -> u64 {
    let m = a.len();
    let mut d = 0;
    for x in 0..m {
        for y in 0..m {
            if a[x] < a[y] && b[x] > b[y] {
                d += 1;
            }
        }
    }
    d
}

#[test]
fn exhaustive_ranking_median_matches_brute_force() {
    let mut rng = rng_from_seed(11);
    for inst in 0..100u64 {
        let m = 3 + (inst % 3) as usize;
        let n = rng.random_range(1..8);
        let objs: Vec<Ranking> = (0..n)
            .map(|i| random_ranking(m, inst * 100 + i as u64).unwrap())
            .collect();
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(1..4) as f64).collect();
        let p = 1 + (inst % 2) as u32;
        let set = WeightedSet::new(objs.clone(), weights.clone()).unwrap();

        let mut best = f64::INFINITY;
        for cand in heap_permutations(m) {
            let om: f64 = objs
                .iter()
                .zip(&weights)
                .map(|(o, w)| w * (kendall_by_items(&cand, o.as_slice()) as f64).powi(p as i32))
                .sum();
            best = best.min(om);
        }

        let fast = RankingMedianSolver::new(m, p).unwrap().solve(&set).unwrap();
        assert_eq!(fast.omega, best, "instance {inst}");
        let space = Rankings::new(m).unwrap();
        let generic =
            exhaustive_median(&space, &space.distance_fn(), &set, p, DEFAULT_CANDIDATE_CAP).unwrap();
        assert_eq!(generic.omega, best);
        assert_eq!(generic.median, fast.median);
        let recomputed: f64 = objs
            .iter()
            .zip(&weights)
            .map(|(o, w)| w * (kendall_by_items(fast.median.as_slice(), o.as_slice()) as f64).powi(p as i32))
            .sum();
        assert_eq!(recomputed, best);
    }
}

#[test]
fn exhaustive_never_worse_than_medoid() {
    for inst in 0..40u64 {
        let objs: Vec<Ranking> = (0..5).map(|i| random_ranking(5, inst * 7 + i).unwrap()).collect();
        let set = WeightedSet::uniform(objs).unwrap();
        let space = Rankings::new(5).unwrap();
        let d = space.distance_fn();
        let ex = RankingMedianSolver::new(5, 1).unwrap().solve(&set).unwrap();
        let md = medoid(&d, &set).unwrap();
        assert!(ex.omega <= md.omega);
        assert_eq!(sum_of_distances(&d, &ex.median, &set).unwrap(), ex.omega);
    }
}

#[test]
fn kendall_tau_axioms_exhaustive_up_to_four() {
    for m in 1..=4 {
        let all = heap_permutations(m);
        for a in &all {
            for b in &all {
                let ra = Ranking::new(a.clone()).unwrap();
                let rb = Ranking::new(b.clone()).unwrap();
                let dab = gmedian_core::spaces::kendall_tau(&ra, &rb).unwrap();
                assert_eq!(dab, kendall_by_items(a, b));
                assert_eq!(dab == 0, a == b);
                assert!(dab <= (m * (m - 1) / 2) as u64);
            }
        }
    }
}

// ---------- real line / Euclidean ----------

#[test]
fn weiszfeld_matches_one_dimensional_median() {
    let tol = 1e-9;
    let mut rng = rng_from_seed(5);
    for inst in 0..1000 {
        let n = 2 * rng.random_range(1..10) + 1;
        let values: Vec<f64> = (0..n).map(|_| rng.random_range(-100.0..100.0)).collect();
        let unit = inst % 2 == 0;
        let weights: Vec<f64> = if unit {
            vec![1.0; n]
        } else {
            (0..n).map(|_| rng.random_range(0.1..3.0)).collect()
        };
        let closed = real_line_median(&WeightedSet::new(values.clone(), weights.clone()).unwrap())
            .unwrap()
            .median;
        // Independent oracle: sort and walk the cumulative weights.
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let half = weights.iter().sum::<f64>() / 2.0;
        let mut acc = 0.0;
        let mut oracle = f64::NAN;
        for &i in &idx {
            acc += weights[i];
            if acc >= half {
                oracle = values[i];
                break;
            }
        }
        assert_eq!(closed, oracle);
        let vset =
            WeightedSet::new(values.iter().map(|v| vec![*v]).collect(), weights.clone()).unwrap();
        let w = weiszfeld(&vset, tol, 10_000).unwrap();
        assert!(
            (w.median[0] - oracle).abs() <= 10.0 * tol,
            "instance {inst}: {} vs {oracle}",
            w.median[0]
        );
    }
}

#[test]
fn weiszfeld_beats_random_probes_in_plane() {
    let mut rng = rng_from_seed(6);
    for _ in 0..50 {
        let pts: Vec<Vec<f64>> = (0..7)
            .map(|_| vec![rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)])
            .collect();
        let set = WeightedSet::uniform(pts).unwrap();
        let r = weiszfeld(&set, 1e-10, 10_000).unwrap();
        assert!(r.converged);
        let d = Euclidean::new(2).unwrap().distance_fn();
        for _ in 0..200 {
            let probe = vec![
                r.median[0] + rng.random_range(-1e-3..1e-3),
                r.median[1] + rng.random_range(-1e-3..1e-3),
            ];
            assert!(r.omega <= sum_of_distances(&d, &probe, &set).unwrap() + 1e-12);
        }
    }
}

// ---------- SO(3) ----------

fn frob(m: &Matrix3<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Matrix logarithm by inverse scaling and squaring: repeated Denman–Beavers
/// square roots until close to I, then the Mercator series.
fn matrix_log(a: &Matrix3<f64>) -> Matrix3<f64> {
    let id = Matrix3::identity();
    let mut x = *a;
    let mut scale = 1.0;
    while frob(&(x - id)) > 1e-3 {
        let (mut y, mut z) = (x, id);
        for _ in 0..100 {
            let yi = y.try_inverse().unwrap();
            let zi = z.try_inverse().unwrap();
            let (ny, nz) = ((y + zi) * 0.5, (z + yi) * 0.5);
            let done = frob(&(ny - y)) < 1e-15;
            y = ny;
            z = nz;
            if done {
                break;
            }
        }
        x = y;
        scale *= 2.0;
    }
    let e = x - id;
    let mut term = e;
    let mut sum = Matrix3::zeros();
    for k in 1..30 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += term * (sign / k as f64);
        term *= e;
    }
    sum * scale
}

#[test]
fn angular_distance_matches_matrix_log() {
    let mut rng = rng_from_seed(9);
    for _ in 0..300 {
        let a = Rotation3::random_uniform(&mut rng);
        let b = Rotation3::random_uniform(&mut rng);
        let rel = a.transpose().compose(&b);
        if rel.angle() > 3.0 {
            continue;
        }
        let oracle = frob(&matrix_log(rel.matrix())) / 2f64.sqrt();
        assert!((angular_distance(&a, &b) - oracle).abs() < 1e-9);
    }
}

#[test]
fn axis_angle_roundtrip() {
    let mut rng = rng_from_seed(10);
    for _ in 0..1000 {
        let axis = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        if axis.iter().map(|x: &f64| x * x).sum::<f64>() < 1e-3 {
            continue;
        }
        let angle = rng.random_range(1e-6..std::f64::consts::PI);
        let r = Rotation3::from_axis_angle(axis, angle).unwrap();
        assert!(Rotation3::from_matrix(*r.matrix()).is_ok());
        assert!((angular_distance(&Rotation3::identity(), &r) - angle).abs() < 1e-9);
    }
}

fn about(axis: [f64; 3], a: f64) -> Rotation3 {
    Rotation3::from_axis_angle(axis, a).unwrap()
}

fn wrap(a: f64) -> f64 {
    let t = std::f64::consts::TAU;
    (a + std::f64::consts::PI).rem_euclid(t) - std::f64::consts::PI
}

/// Minimises `Σ wᵢ |wrap(θ − θᵢ)|^p` on the circle: coarse grid, then
/// golden-section refinement around the best grid cell.
fn circular_oracle(angles: &[f64], weights: &[f64], p: i32) -> f64 {
    let f = |t: f64| -> f64 {
        angles
            .iter()
            .zip(weights)
            .map(|(a, w)| w * wrap(t - a).abs().powi(p))
            .sum()
    };
    if p == 1 {
        // Piecewise linear in θ: the optimum sits on a data angle.
        return *angles
            .iter()
            .min_by(|a, b| f(**a).partial_cmp(&f(**b)).unwrap())
            .unwrap();
    }
    let steps = 20_000;
    let h = std::f64::consts::TAU / steps as f64;
    let best = (0..steps)
        .map(|i| -std::f64::consts::PI + i as f64 * h)
        .min_by(|a, b| f(*a).partial_cmp(&f(*b)).unwrap())
        .unwrap();
    let (mut lo, mut hi) = (best - h, best + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = hi - g * (hi - lo);
        let d = lo + g * (hi - lo);
        if f(c) < f(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    (lo + hi) / 2.0
}

#[test]
fn single_axis_so3_matches_circular_oracles() {
    let tol = 1e-7;
    let mut rng = rng_from_seed(12);
    for inst in 0..60 {
        let axis = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), 0.5];
        let n = 2 * rng.random_range(1..5) + 1;
        let angles: Vec<f64> = (0..n).map(|_| rng.random_range(-1.2..1.2)).collect();
        let weights: Vec<f64> = if inst % 2 == 0 {
            vec![1.0; n]
        } else {
            (0..n).map(|_| rng.random_range(0.5..2.0)).collect()
        };
        let set =
            WeightedSet::new(angles.iter().map(|a| about(axis, *a)).collect(), weights.clone())
                .unwrap();

        let mean = so3_mean(&set, tol, 10_000).unwrap();
        let oracle = about(axis, circular_oracle(&angles, &weights, 2));
        assert!(mean.converged);
        assert!(
            angular_distance(&mean.median, &oracle) <= 10.0 * tol,
            "mean instance {inst}: {}",
            angular_distance(&mean.median, &oracle)
        );

        let med = so3_median(&set, tol, 10_000).unwrap();
        let oracle = about(axis, circular_oracle(&angles, &weights, 1));
        assert!(
            angular_distance(&med.median, &oracle) <= 10.0 * tol,
            "median instance {inst}: {}",
            angular_distance(&med.median, &oracle)
        );
    }
}

#[test]
fn paper_single_axis_example() {
    let z = [0.0, 0.0, 1.0];
    let set = WeightedSet::uniform(vec![
        about(z, 0.0),
        about(z, 10f64.to_radians()),
        about(z, 50f64.to_radians()),
    ])
    .unwrap();
    let oracle_mean = circular_oracle(&[0.0, 10f64.to_radians(), 50f64.to_radians()], &[1.0; 3], 2);
    assert!((oracle_mean - 20f64.to_radians()).abs() < 1e-9);
    let mean = so3_mean(&set, 1e-7, 10_000).unwrap();
    assert!(angular_distance(&mean.median, &about(z, 20f64.to_radians())) < 1e-6);
    let med = so3_median(&set, 1e-7, 10_000).unwrap();
    assert!(angular_distance(&med.median, &about(z, 10f64.to_radians())) < 1e-6);
}

// ---------- weighted means ----------

fn check_weighted_mean<S: Space>(space: &S, x: &S::Object, z: &S::Object, w: f64) {
    let y = space.weighted_mean(x, z, w).unwrap();
    let dxz = space.distance(x, z).unwrap();
    let dxy = space.distance(x, &y).unwrap();
    let dyz = space.distance(&y, z).unwrap();
    let scale = dxz.max(1.0);
    assert!((dxy - w * dxz).abs() <= 1e-9 * scale, "{dxy} vs {}", w * dxz);
    assert!((dyz - (1.0 - w) * dxz).abs() <= 1e-9 * scale);
}

#[test]
fn weighted_mean_postconditions() {
    let mut rng = rng_from_seed(13);
    let e3 = Euclidean::new(3).unwrap();
    for _ in 0..1000 {
        let w: f64 = rng.random_range(0.0..=1.0);
        check_weighted_mean(&RealLine, &rng.random_range(-1e3..1e3), &rng.random_range(-1e3..1e3), w);
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-10.0..10.0)).collect();
        let z: Vec<f64> = (0..3).map(|_| rng.random_range(-10.0..10.0)).collect();
        check_weighted_mean(&e3, &x, &z, w);
        let a = Rotation3::random_uniform(&mut rng);
        let b = Rotation3::random_uniform(&mut rng);
        if angular_distance(&a, &b) < 3.1 {
            check_weighted_mean(&Rotations, &a, &b, w);
        }
    }
    let ints = Integers::new(-1000, 1000).unwrap();
    for _ in 0..1000 {
        let x = rng.random_range(-500..500i64);
        let steps = rng.random_range(1..20i64);
        let z = x + steps * rng.random_range(-20..20i64);
        let i = rng.random_range(0..=steps);
        check_weighted_mean(&ints, &x, &z, i as f64 / steps as f64);
    }
}

#[test]
fn so3_quarter_turn_midpoint() {
    let z = [0.0, 0.0, 1.0];
    let y = Rotations
        .weighted_mean(&Rotation3::identity(), &about(z, std::f64::consts::FRAC_PI_2), 0.5)
        .unwrap();
    assert!(angular_distance(&y, &about(z, std::f64::consts::FRAC_PI_4)) < 1e-12);
}

#[test]
fn ranking_space_has_no_weighted_mean() {
    let s = Rankings::new(3).unwrap();
    let r = Ranking::identity(3).unwrap();
    assert!(s.weighted_mean(&r, &r.reversed(), 0.5).is_err());
}
