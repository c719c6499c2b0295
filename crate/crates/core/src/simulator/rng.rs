//! Seed derivation and random streams.
//!
//! Every replication owns a snapshot seed. Per-node draws come from ChaCha
//! streams keyed by `(snapshot seed, purpose)`; per-pair draws (beam
//! alignment, fading) are counter-based hashes of `(seed, purpose, a, b)`, so
//! they do not depend on iteration order and adding a new purpose never
//! shifts existing draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub(crate) enum Purpose {
    Count = 1,
    Position = 2,
    Mode = 3,
    Mark = 4,
    Duty = 5,
    Offset = 6,
    RxAngle = 7,
    SlotActivity = 8,
    VictimPick = 9,
    AlignSense = 10,
    AlignRx = 11,
    AlignRadar = 12,
    SenseFade = 13,
    SignalFade = 14,
    InterferenceFade = 15,
}

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic 64-bit combination of a seed with a sequence of indices.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix64(seed), |acc, &p| mix64(acc ^ mix64(p)))
}

pub(crate) fn stream(seed: u64, purpose: Purpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(purpose as u64);
    rng
}

/// Uniform draw in `(0, 1)` attached to an ordered pair.
#[inline]
pub(crate) fn pair_unit(seed: u64, purpose: Purpose, a: u64, b: u64) -> f64 {
    let h = mix64(mix64(mix64(seed ^ (purpose as u64).wrapping_mul(0xA24B_AED4_963E_E407)) ^ a) ^ b.rotate_left(32));
    ((h >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Exponential draw with rate `mu` attached to an ordered pair.
#[inline]
pub(crate) fn pair_exp(seed: u64, purpose: Purpose, a: u64, b: u64, mu: f64) -> f64 {
    -pair_unit(seed, purpose, a, b).ln() / mu
}
