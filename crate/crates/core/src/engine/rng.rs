//! Counter-based random substreams.
//!
//! Every stochastic draw in a run comes from a stream keyed by
//! `(seed, purpose, ue, index)`. Streams never share state, so the order in
//! which UEs or sweep points are processed has no effect on the numbers drawn.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a substream is used for. The discriminant is part of the stream key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Stream {
    Spawn = 1,
    Waypoint = 2,
    Shadow = 3,
    FastFading = 4,
    Validation = 5,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream_key(seed: u64, purpose: Stream, ue: u64, index: u64) -> u64 {
    let mut k = splitmix64(seed);
    k = splitmix64(k ^ purpose as u64);
    k = splitmix64(k ^ ue);
    splitmix64(k ^ index)
}

pub fn substream(seed: u64, purpose: Stream, ue: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_key(seed, purpose, ue, index))
}
