//! Seed derivation.
//!
//! Every random quantity in the crate comes from a `ChaCha8Rng` seeded with a
//! 64-bit value. Sub-seeds for trials and purposes are derived by folding the
//! parts through SplitMix64, so `derive_seed(s, &[trial, k])` is a pure
//! function of its inputs and trials can run in any order or in parallel.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type GmRng = ChaCha8Rng;

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes a base seed together with an ordered list of stream identifiers.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(base), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn rng_from_seed(seed: u64) -> GmRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Purpose tags for [`derive_seed`].
pub mod purpose {
    pub const DATA: u64 = 1;
    pub const OUTLIERS: u64 = 2;
    pub const INDICES: u64 = 3;
    pub const BASE: u64 = 4;
    pub const WEIGHTS: u64 = 5;
}
