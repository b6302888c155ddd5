//! Exact generalized medians by enumerating the whole domain.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{GmError, Result};
use crate::metric::{DistanceFn, WeightedSet};
use crate::solvers::{min_by_value_then_index, MedianResult, MedianSolver};
use crate::spaces::ranking::{enumerate_rankings, PairSignature, Ranking, MAX_ENUMERATION_LEN};
use crate::spaces::Space;

pub const DEFAULT_CANDIDATE_CAP: u64 = 1_000_000;

fn check_power(p: u32) -> Result<()> {
    if p == 0 {
        return Err(GmError::invalid("distance power must be >= 1"));
    }
    Ok(())
}

/// Global minimiser of `Σ wᵢ·d(·, oᵢ)^p` over every object of `space`.
///
/// The first minimiser in enumeration order wins.
pub fn exhaustive_median<S>(
    space: &S,
    d: &DistanceFn<S::Object>,
    set: &WeightedSet<S::Object>,
    p: u32,
    cap: u64,
) -> Result<MedianResult<S::Object>>
where
    S: Space,
{
    check_power(p)?;
    let count = space.candidate_count().ok_or(GmError::Capability {
        space: space.name(),
        capability: "enumeration",
    })?;
    if count > cap {
        return Err(GmError::Resource(format!(
            "{count} candidates exceed the enumeration cap of {cap}"
        )));
    }
    let candidates: Vec<S::Object> = space.enumerate()?.collect();
    let omegas = candidates
        .par_iter()
        .map(|c| {
            set.iter().try_fold(0.0, |acc, (o, w)| {
                Ok(acc + w * d.eval(c, o)?.powi(p as i32))
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let (idx, omega) = omegas
        .into_iter()
        .enumerate()
        .reduce(min_by_value_then_index)
        .ok_or_else(|| GmError::invalid("space enumerated no candidates"))?;
    Ok(MedianResult::exact(
        candidates[idx].clone(),
        omega,
        candidates.len(),
        "exhaustive",
    ))
}

/// Exhaustive Kendall-tau solver for rankings of a fixed length.
///
/// Candidates and their pair signatures are built once; each solve is then
/// `m!·n` XOR-popcounts.
#[derive(Debug, Clone)]
pub struct RankingMedianSolver {
    m: usize,
    p: u32,
    candidates: Arc<[Ranking]>,
    signatures: Arc<[PairSignature]>,
}

impl RankingMedianSolver {
    pub fn new(m: usize, p: u32) -> Result<Self> {
        Self::with_cap(m, p, DEFAULT_CANDIDATE_CAP)
    }

    pub fn with_cap(m: usize, p: u32, cap: u64) -> Result<Self> {
        check_power(p)?;
        if m > MAX_ENUMERATION_LEN {
            return Err(GmError::Resource(format!(
                "rankings of length {m} cannot be enumerated (max {MAX_ENUMERATION_LEN})"
            )));
        }
        let count = crate::spaces::ranking::factorial(m);
        if count > cap {
            return Err(GmError::Resource(format!(
                "{count} candidates exceed the enumeration cap of {cap}"
            )));
        }
        let candidates: Vec<Ranking> = enumerate_rankings(m)?.collect();
        let signatures = candidates
            .iter()
            .map(Ranking::signature)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            m,
            p,
            candidates: candidates.into(),
            signatures: signatures.into(),
        })
    }

    /// Same candidate table with a different distance power.
    pub fn with_power(&self, p: u32) -> Result<Self> {
        check_power(p)?;
        Ok(Self { p, ..self.clone() })
    }

    pub fn ranking_len(&self) -> usize {
        self.m
    }
}

impl MedianSolver<Ranking> for RankingMedianSolver {
    fn solve(&self, set: &WeightedSet<Ranking>) -> Result<MedianResult<Ranking>> {
        let inputs = set
            .iter()
            .map(|(r, w)| {
                if r.len() != self.m {
                    return Err(GmError::invalid(format!(
                        "expected rankings of length {}, got {}",
                        self.m,
                        r.len()
                    )));
                }
                Ok((r.signature()?, w))
            })
            .collect::<Result<Vec<_>>>()?;
        let p = self.p as i32;
        let (idx, omega) = self
            .signatures
            .par_iter()
            .with_min_len(256)
            .enumerate()
            .map(|(i, sig)| {
                let omega = inputs
                    .iter()
                    .map(|(s, w)| w * (sig.kendall_tau(*s) as f64).powi(p))
                    .sum::<f64>();
                (i, omega)
            })
            .reduce(|| (usize::MAX, f64::INFINITY), min_by_value_then_index);
        Ok(MedianResult::exact(
            self.candidates[idx].clone(),
            omega,
            self.candidates.len(),
            "exhaustive-ranking",
        ))
    }

    fn label(&self) -> &'static str {
        if self.p == 1 {
            "ranking-median"
        } else {
            "ranking-mean"
        }
    }

    fn power(&self) -> u32 {
        self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Integers, Rankings};

    fn r(v: &[u32]) -> Ranking {
        Ranking::new(v.to_vec()).unwrap()
    }

    fn four_rankings() -> Vec<Ranking> {
        vec![
            r(&[1, 2, 4, 3, 5]),
            r(&[1, 2, 3, 5, 4]),
            r(&[2, 1, 3, 4, 5]),
            r(&[1, 3, 2, 4, 5]),
        ]
    }

    #[test]
    fn four_ranking_median() {
        let space = Rankings::new(5).unwrap();
        let set = WeightedSet::uniform(four_rankings()).unwrap();
        let res = exhaustive_median(&space, &space.distance_fn(), &set, 1, DEFAULT_CANDIDATE_CAP)
            .unwrap();
        assert_eq!(res.median, r(&[1, 2, 3, 4, 5]));
        assert_eq!(res.omega, 4.0);
        assert_eq!(res.iterations, 120);

        let fast = RankingMedianSolver::new(5, 1).unwrap().solve(&set).unwrap();
        assert_eq!(fast.median, res.median);
        assert_eq!(fast.omega, res.omega);
    }

    #[test]
    fn added_reversals_shift_the_median() {
        let mut objs = four_rankings();
        objs.extend(std::iter::repeat_n(r(&[5, 4, 3, 2, 1]), 3));
        let set = WeightedSet::uniform(objs).unwrap();
        let res = RankingMedianSolver::new(5, 1).unwrap().solve(&set).unwrap();
        assert_eq!(res.omega, 32.0);
        let at_identity: f64 = set
            .objects()
            .iter()
            .map(|o| crate::spaces::kendall_tau(&r(&[1, 2, 3, 4, 5]), o).unwrap() as f64)
            .sum();
        assert_eq!(at_identity, 34.0);
    }

    #[test]
    fn copies_of_one_object() {
        let x = r(&[3, 1, 4, 2]);
        let set = WeightedSet::uniform(vec![x.clone(); 5]).unwrap();
        for p in 1..=3 {
            let res = RankingMedianSolver::new(4, p).unwrap().solve(&set).unwrap();
            assert_eq!((res.median.clone(), res.omega), (x.clone(), 0.0));
        }
    }

    #[test]
    fn cap_and_capability_errors() {
        let space = Rankings::new(5).unwrap();
        let set = WeightedSet::uniform(four_rankings()).unwrap();
        assert!(matches!(
            exhaustive_median(&space, &space.distance_fn(), &set, 1, 100),
            Err(GmError::Resource(_))
        ));
        assert!(matches!(
            RankingMedianSolver::with_cap(8, 1, 1000),
            Err(GmError::Resource(_))
        ));
        assert!(RankingMedianSolver::new(10, 1).is_err());
        let wrong_len = WeightedSet::uniform(vec![r(&[1, 2, 3])]).unwrap();
        assert!(RankingMedianSolver::new(5, 1).unwrap().solve(&wrong_len).is_err());
        assert!(exhaustive_median(&space, &space.distance_fn(), &set, 0, 1000).is_err());
    }

    #[test]
    fn integer_range_squared_gives_rounded_mean() {
        let space = Integers::new(-50, 50).unwrap();
        let set = WeightedSet::uniform(vec![0, 0, 0, 10]).unwrap();
        let res = exhaustive_median(&space, &space.distance_fn(), &set, 2, 1000).unwrap();
        // mean 2.5: Ω(2) = 12 + 64 = 76 = Ω(3) = 27 + 49; first in order wins
        assert_eq!(res.median, 2);
        let med = exhaustive_median(&space, &space.distance_fn(), &set, 1, 1000).unwrap();
        assert_eq!(med.median, 0);
    }
}
