//! Counter-addressable random streams.
//!
//! Every trial owns a ChaCha8 stream keyed by the run seed and selected by the
//! trial index, so trial `i` can be generated without touching trials
//! `0..i`. Results therefore do not depend on worker count or scheduling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

const TRIAL_DOMAIN: u64 = 0x7472_6961_6c73_0001;
const DERIVE_DOMAIN: u64 = 0x6465_7269_7665_0002;

fn keyed(seed: u64, domain: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> TrialRng {
    let mut rng = keyed(seed, TRIAL_DOMAIN);
    rng.set_stream(index);
    rng
}

/// Child seed for sub-run `index`, independent of the trial streams of `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut rng = keyed(seed, DERIVE_DOMAIN);
    rng.set_stream(index);
    rng.next_u64()
}
