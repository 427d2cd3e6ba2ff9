//! Seeding contract for reproducible parallel Monte Carlo.
//!
//! Every random stream is addressed by `(seed, stream, word position)`.
//! ChaCha is a counter-based generator, so a walker or realization can be
//! processed by any worker and still see exactly the same numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derive an independent child seed from `(base, index)` (splitmix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for stream `stream` of `seed`, positioned at `word_pos`.
pub fn stream_rng(seed: u64, stream: u64, word_pos: u128) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(word_pos);
    rng
}
