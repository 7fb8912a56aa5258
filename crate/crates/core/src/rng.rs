//! Keyed, counter-based uniform draws.
//!
//! Every random decision in graph generation and in the walks is a pure
//! function of a seed and a small tuple of integers, so results do not depend
//! on iteration order or thread count.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes a seed and a key tuple into 64 well-mixed bits.
#[inline]
pub fn keyed_u64(seed: u64, keys: &[u64]) -> u64 {
    let mut h = mix64(seed.wrapping_add(GOLDEN));
    for &k in keys {
        h = mix64(h ^ k.wrapping_add(GOLDEN));
    }
    h
}

/// Uniform in [0, 1) with 53 bits of precision.
#[inline]
pub fn keyed_uniform(seed: u64, keys: &[u64]) -> f64 {
    (keyed_u64(seed, keys) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `0..n` (n > 0).
#[inline]
pub fn keyed_index(seed: u64, keys: &[u64], n: usize) -> usize {
    debug_assert!(n > 0);
    let idx = (keyed_uniform(seed, keys) * n as f64) as usize;
    idx.min(n - 1)
}

/// Derives a child seed, e.g. for an iteration of an experiment.
pub fn derive_seed(seed: u64, keys: &[u64]) -> u64 {
    keyed_u64(seed, keys)
}

// Domain tags keep the key spaces of different consumers apart.
pub(crate) const TAG_EDGE: u64 = 1;
pub(crate) const TAG_WALK: u64 = 2;
pub(crate) const TAG_REPLICANT: u64 = 3;
pub(crate) const TAG_START: u64 = 4;
pub(crate) const TAG_LANCZOS: u64 = 5;
