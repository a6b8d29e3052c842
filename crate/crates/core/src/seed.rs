//! Seed derivation.
//!
//! Every experiment has one master seed. Each Monte Carlo trial and each
//! independent random quantity inside a trial draws from its own stream,
//! derived by hashing `(parent, index)` with SplitMix64 finalization. The
//! derived values are recorded in results so single trials can be replayed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Pseudorandom generator used throughout the crate.
pub type SimRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed of child stream `index` from `parent`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    splitmix64(splitmix64(parent) ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// Generator for a given seed.
pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream tags for the random quantities drawn inside one trial.
pub mod stream {
    pub const TWO_LAYER_CHANNEL: u64 = 1;
    pub const MULTI_LAYER_CHANNEL: u64 = 2;
    pub const CONVENTIONAL_CHANNEL: u64 = 3;
    pub const BER_SYMBOLS: u64 = 4;
    pub const SOLVER: u64 = 5;
}
