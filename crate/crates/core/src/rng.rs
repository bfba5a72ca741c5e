//! Seeding contract.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] seeded through
//! `rand_core`'s portable `seed_from_u64`, so streams are bit-identical across
//! platforms. Independent sub-streams (trial `t` of size `n` of experiment
//! with master seed `s`, ...) get their seed from [`derive_seed`], a
//! SplitMix64 fold over the label path.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the sub-stream named by `path` under `master`.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut h = mix64(master.wrapping_add(GOLDEN));
    for &label in path {
        h = mix64(h ^ mix64(label.wrapping_add(GOLDEN)).wrapping_add(GOLDEN));
    }
    h
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
