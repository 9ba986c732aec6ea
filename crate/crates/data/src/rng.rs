//! Seeded RNG construction.
//!
//! Every random choice in the workspace draws from a ChaCha12 generator keyed
//! by `(seed, stream)`. Streams 1–4 are reserved by the training stack
//! (init, shuffling, Monte-Carlo sampling); dataset synthesis uses stream 5.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub const STREAM_DATA: u64 = 5;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
