//! Named random streams.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] seeded by
//! [`derive_seed`], which folds a master seed with an ordered list of string
//! labels. The rule is: start from the master seed, and for each label,
//! xor in the FNV-1a 64-bit hash of its UTF-8 bytes and pass the result
//! through the SplitMix64 finalizer. Two streams share state only if every
//! label matches, so adding a new consumer never perturbs existing ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(FNV_PRIME)
    })
}

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed<S: AsRef<str>>(master: u64, labels: &[S]) -> u64 {
    labels.iter().fold(splitmix64(master), |h, l| {
        splitmix64(h ^ fnv1a(l.as_ref().as_bytes()))
    })
}

pub fn stream<S: AsRef<str>>(master: u64, labels: &[S]) -> Stream {
    ChaCha8Rng::seed_from_u64(derive_seed(master, labels))
}

pub fn stream_from_seed(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}
