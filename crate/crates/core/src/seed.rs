//! Seed derivation. Every random draw in the toolkit flows from a global seed
//! through [`derive_seed`], so parallel evaluation order never changes output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xxhash_rust::xxh3::xxh3_64_with_seed;

pub type Rng = ChaCha8Rng;

/// `hash(global_seed, stage, unit_id)` using seeded XXH3-64.
pub fn derive_seed(global_seed: u64, stage: &str, unit_id: &str) -> u64 {
    let mut buf = Vec::with_capacity(stage.len() + unit_id.len() + 1);
    buf.extend_from_slice(stage.as_bytes());
    buf.push(0);
    buf.extend_from_slice(unit_id.as_bytes());
    xxh3_64_with_seed(&buf, global_seed)
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
