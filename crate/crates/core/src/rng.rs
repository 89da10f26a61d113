//! Derived random streams.
//!
//! Every randomized routine draws from a ChaCha8 stream keyed by
//! `(seed, tag, index)`. The key is produced by SplitMix64 over the seed, the
//! FNV-1a hash of the tag and the index, so streams for different purposes or
//! repeat indices never overlap in practice and runs are reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Seed used when the caller passes 0.
pub const DEFAULT_SEED: u64 = 0x5eed_acc0_7a12_0001;

fn fnv1a(tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn effective_seed(seed: u64) -> u64 {
    if seed == 0 {
        DEFAULT_SEED
    } else {
        seed
    }
}

pub fn stream(seed: u64, tag: &str, index: u64) -> Rng {
    let mut state = effective_seed(seed) ^ fnv1a(tag).rotate_left(17);
    let _ = splitmix(&mut state);
    state ^= index.wrapping_mul(0xd6e8_feb8_6659_fd93);
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
