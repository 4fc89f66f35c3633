//! Seed handling.
//!
//! Every sampler takes an explicit `u64` seed and builds its own ChaCha8
//! stream from it. Child seeds are derived with a SplitMix64 mix of
//! `(parent, index)`, so trial `i` of an experiment always sees the same
//! stream no matter which thread runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of child stream `index` from `parent`.
///
/// `derive_seed(s, i) = splitmix64(splitmix64(s) ^ splitmix64(i + 1))`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    splitmix64(splitmix64(parent) ^ splitmix64(index.wrapping_add(1)))
}
