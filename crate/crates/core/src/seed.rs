//! Seed derivation.
//!
//! All randomness in the crate flows from a single `u64` master seed. Derived
//! seeds are pure functions of the master seed and a tuple of integer keys, so
//! results never depend on thread scheduling or iteration order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used everywhere in the crate.
pub type Rng = ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `master` and an ordered list of keys.
pub fn derive_seed(master: u64, keys: &[u64]) -> u64 {
    let mut h = mix64(master.wrapping_add(GOLDEN));
    for (i, &k) in keys.iter().enumerate() {
        h = mix64(h ^ mix64(k.wrapping_add(GOLDEN.wrapping_mul(i as u64 + 2))));
    }
    h
}

/// A generator keyed by `(master, keys)`.
pub fn rng_for(master: u64, keys: &[u64]) -> Rng {
    Rng::seed_from_u64(derive_seed(master, keys))
}
