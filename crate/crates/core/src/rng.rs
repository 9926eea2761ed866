//! Deterministic random streams.
//!
//! Everything random is driven by one master seed. Independent streams
//! (one per codebook, one per Monte Carlo trial) use the 64-bit seed
//! `derive_seed(master, index)` fed to ChaCha20, so results do not depend on
//! how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type StreamRng = ChaCha20Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of stream `index` under `master`: `splitmix64(master ^ splitmix64(index))`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

pub fn seeded_rng(seed: u64) -> StreamRng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn stream_rng(master: u64, index: u64) -> StreamRng {
    seeded_rng(derive_seed(master, index))
}
