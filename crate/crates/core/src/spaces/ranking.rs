//! Rankings (permutations of `1..=m`) under the Kendall-tau distance.

use serde::{Deserialize, Serialize};

use crate::error::{GmError, Result};
use crate::spaces::Space;

/// Largest length accepted by [`enumerate_rankings`].
pub const MAX_ENUMERATION_LEN: usize = 9;

/// Largest length with a 64-bit [`PairSignature`].
pub const MAX_SIGNATURE_LEN: usize = 11;

/// A permutation of `1..=m`, serialized as a plain JSON array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Ranking(Vec<u32>);

impl Ranking {
    pub fn new(perm: Vec<u32>) -> Result<Self> {
        let m = perm.len();
        if m == 0 {
            return Err(GmError::invalid("ranking must not be empty"));
        }
        let mut seen = vec![false; m];
        for &v in &perm {
            let idx = v as usize;
            if idx == 0 || idx > m || seen[idx - 1] {
                return Err(GmError::invalid(format!(
                    "{perm:?} is not a permutation of 1..={m}"
                )));
            }
            seen[idx - 1] = true;
        }
        Ok(Self(perm))
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::new((1..=m as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn reversed(&self) -> Ranking {
        Ranking(self.0.iter().rev().copied().collect())
    }

    /// Exchanges the ranks `v` and `v + 1` between the two items holding
    /// them, an adjacent transposition of the ordering. Changes the
    /// Kendall-tau distance to any other ranking by exactly one.
    pub fn swap_ranks(&mut self, v: u32) {
        let a = self.0.iter().position(|&x| x == v);
        let b = self.0.iter().position(|&x| x == v + 1);
        if let (Some(a), Some(b)) = (a, b) {
            self.0.swap(a, b);
        }
    }

    /// Bitmask over position pairs `i < j`, bit set when `r[i] < r[j]`.
    /// Kendall-tau is then the popcount of the XOR of two signatures.
    pub fn signature(&self) -> Result<PairSignature> {
        let m = self.0.len();
        if m > MAX_SIGNATURE_LEN {
            return Err(GmError::invalid(format!(
                "pair signatures support length <= {MAX_SIGNATURE_LEN}, got {m}"
            )));
        }
        let mut bits = 0u64;
        let mut bit = 0;
        for i in 0..m {
            for j in (i + 1)..m {
                if self.0[i] < self.0[j] {
                    bits |= 1 << bit;
                }
                bit += 1;
            }
        }
        Ok(PairSignature(bits))
    }
}

impl TryFrom<Vec<u32>> for Ranking {
    type Error = GmError;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Ranking::new(v)
    }
}

impl From<Ranking> for Vec<u32> {
    fn from(r: Ranking) -> Self {
        r.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairSignature(u64);

impl PairSignature {
    #[inline]
    pub fn kendall_tau(self, other: PairSignature) -> u32 {
        (self.0 ^ other.0).count_ones()
    }
}

/// Number of position pairs `(i, j)` on which the two rankings disagree.
pub fn kendall_tau(r1: &Ranking, r2: &Ranking) -> Result<u64> {
    let (a, b) = (r1.as_slice(), r2.as_slice());
    if a.len() != b.len() {
        return Err(GmError::invalid(format!(
            "rankings of different length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let mut discordant = 0;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if (a[i] < a[j]) != (b[i] < b[j]) {
                discordant += 1;
            }
        }
    }
    Ok(discordant)
}

/// Lexicographic enumeration of all `m!` rankings of length `m`.
pub fn enumerate_rankings(m: usize) -> Result<RankingIter> {
    if !(1..=MAX_ENUMERATION_LEN).contains(&m) {
        return Err(GmError::invalid(format!(
            "ranking length must be in 1..={MAX_ENUMERATION_LEN}, got {m}"
        )));
    }
    Ok(RankingIter {
        next: Some((1..=m as u32).collect()),
    })
}

pub struct RankingIter {
    next: Option<Vec<u32>>,
}

impl Iterator for RankingIter {
    type Item = Ranking;

    fn next(&mut self) -> Option<Ranking> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Ranking(current))
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

/// Rankings of a fixed length.
#[derive(Debug, Clone, Copy)]
pub struct Rankings {
    pub m: usize,
}

impl Rankings {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(GmError::invalid("ranking length must be at least 1"));
        }
        Ok(Self { m })
    }
}

impl Space for Rankings {
    type Object = Ranking;

    fn name(&self) -> &'static str {
        "ranking"
    }

    fn distance(&self, a: &Ranking, b: &Ranking) -> Result<f64> {
        if a.len() != self.m {
            return Err(GmError::invalid(format!(
                "expected ranking of length {}, got {}",
                self.m,
                a.len()
            )));
        }
        kendall_tau(a, b).map(|d| d as f64)
    }

    fn candidate_count(&self) -> Option<u64> {
        (self.m <= MAX_ENUMERATION_LEN).then(|| factorial(self.m))
    }

    fn enumerate(&self) -> Result<Box<dyn Iterator<Item = Ranking> + '_>> {
        Ok(Box::new(enumerate_rankings(self.m)?))
    }
}
