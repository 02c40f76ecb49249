//! Deterministic PRNG streams keyed by (seed, purpose, index).

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) const TAG_COLUMN: u8 = 0;
pub(crate) const TAG_RESTART: u8 = 1;
pub(crate) const TAG_TIEBREAK: u8 = 2;

/// Independent ChaCha8 stream for a (seed, tag, index) triple.
///
/// The 32-byte key layout is fixed (seed LE at 0..8, tag at 8, index LE at
/// 16..24) so generated designs and traces are reproducible across versions
/// and independent of evaluation order.
pub(crate) fn stream(seed: u64, tag: u8, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8] = tag;
    key[16..24].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
