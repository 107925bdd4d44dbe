//! Deterministic seeding.
//!
//! Every optimizer owns one [`ChaCha8Rng`] built from a 64-bit seed. Nested
//! optimizers never share a stream: a child's seed is `derive(parent, index)`,
//! a SplitMix64 mix of the parent seed and the child index. The same rule gives
//! per-ask sub-seeds (e.g. for softmax decoding), keyed by the ask counter.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One SplitMix64 output step.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of child `index` of an object seeded with `seed`.
pub fn derive(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x632B_E59B_D9B4_E019)))
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
