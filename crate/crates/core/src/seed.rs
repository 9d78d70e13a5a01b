//! Deterministic seed derivation.
//!
//! Parallel experiment trials, sensitivity-estimation pair sampling, and data
//! generation all draw from independent RNG streams derived from one master
//! seed. The splitter is SplitMix64 applied to `seed + GOLDEN * stream`,
//! which is the standard finalizer used to expand a single 64-bit seed; two
//! distinct stream ids never collide for a fixed master seed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(GOLDEN);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive the seed for a numbered stream (trial index, sampler id, ...).
pub fn derive(seed: u64, stream: u64) -> u64 {
    splitmix64(seed.wrapping_add(GOLDEN.wrapping_mul(stream.wrapping_add(1))))
}

/// Seeded RNG for a derived stream.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, stream))
}
