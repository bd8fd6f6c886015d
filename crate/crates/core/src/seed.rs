//! Seed derivation.
//!
//! Every random stream in the crate is a `ChaCha8Rng` seeded from a 64-bit
//! value. Derived streams (replicates, sweep points, split vs. negatives) mix
//! their coordinates into the base seed with the SplitMix64 finalizer, so a
//! stream is a pure function of `(base_seed, coordinates...)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `base ⊕ hash(coords)`, folding coordinates left to right.
pub fn derive(base: u64, coords: &[u64]) -> u64 {
    let mut h = 0x6A09_E667_F3BC_C908u64;
    for &c in coords {
        h = mix64(h ^ c);
    }
    base ^ h
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream labels for [`derive`], so that independent uses of one seed never collide.
pub mod stream {
    pub const HOLDOUT: u64 = 0x686f_6c64;
    pub const NEGATIVES: u64 = 0x6e65_6773;
    pub const GRAPH: u64 = 0x6772_6170;
    pub const RANDOM_SCORES: u64 = 0x7261_6e64;
}
