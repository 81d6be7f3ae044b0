//! Seeded random source used throughout training and data generation.
//!
//! All randomness flows from a single ChaCha8 stream (`rand_chacha`), whose
//! output is stable across platforms and crate versions for a given seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type MachineRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> MachineRng {
    ChaCha8Rng::seed_from_u64(seed)
}
