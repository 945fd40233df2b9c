//! Counter-based seed derivation for reproducible parallel RNG substreams.
//!
//! Every unit of randomized work (a subsample, a grid point, a benchmark
//! replication) gets its own `ChaCha8Rng` seeded from the master seed and a
//! sequence of integer tags. Results are then independent of evaluation
//! order and of how work is scheduled across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a master seed and a path of tags.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &tag in tags {
        state = splitmix64(state ^ tag.wrapping_mul(0xD134_2543_DE82_EF95));
    }
    state
}

/// RNG substream addressed by (master seed, tag path).
pub fn substream(master: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, tags))
}
