//! Seed derivation. Every stochastic stream is a ChaCha8 generator keyed by a
//! base seed and a path of integers (run index, block chunk, ...), so results
//! do not depend on scheduling or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for the stream identified by `seed` and `path`.
pub fn derive(seed: u64, path: &[u64]) -> SimRng {
    let mut state = splitmix64(seed);
    for &p in path {
        state = splitmix64(state ^ splitmix64(p.wrapping_add(0x5851_F42D_4C95_7F2D)));
    }
    ChaCha8Rng::seed_from_u64(state)
}

/// Stream tags keep unrelated consumers of one seed apart.
pub mod tag {
    pub const INIT: u64 = 1;
    pub const DATA: u64 = 2;
    pub const SHUFFLE: u64 = 3;
    pub const NOISE: u64 = 4;
    pub const EVAL: u64 = 5;
    pub const ACF: u64 = 6;
    pub const DUMP: u64 = 7;
}
