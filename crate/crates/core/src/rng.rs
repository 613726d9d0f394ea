//! Deterministic random source used by every scheduling strategy.
//!
//! Schedules must be reproducible bit-for-bit across platforms and across
//! releases, so this module pins the entire pipeline from seed to permutation:
//!
//! 1. the 64-bit seed is expanded to a 256-bit key with four rounds of
//!    SplitMix64 (Steele, Lea & Flood's published finalizer constants),
//! 2. the key drives a ChaCha stream cipher with 8 rounds (word counter and
//!    stream id both zero), consumed as little-endian 64-bit words,
//! 3. bounded draws use rejection sampling (values below `2^64 mod n` are
//!    discarded, the survivor is reduced modulo `n`), which is exact and
//!    bias-free,
//! 4. permutations use the classic Fisher–Yates walk from the top index down.
//!
//! None of these steps depends on word size, endianness or hash-map iteration
//! order, so a `(seed, input)` pair yields the same schedule everywhere.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 step used to stretch a 64-bit seed into a ChaCha key.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seedable stream of random words with unbiased bounded draws and an
/// in-place Fisher–Yates shuffle.
///
/// Cloning is cheap and copies the stream position, which makes it easy to
/// fork reproducible sub-streams in tests.
#[derive(Clone, Debug)]
pub struct PortableRng {
    inner: ChaCha8Rng,
}

impl PortableRng {
    /// Creates a generator for `seed`. Equal seeds produce equal streams.
    pub fn new(seed: u64) -> Self {
        let mut state = seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        Self {
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    /// Next raw 64-bit word of the stream.
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw from `0..n`.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "cannot draw from an empty range");
        // Reject the low `2^64 mod n` values so the modulo step is unbiased.
        let threshold = n.wrapping_neg() % n;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % n;
            }
        }
    }

    /// Shuffles `items` in place with Fisher–Yates, walking from the last
    /// index down and swapping each position with a draw from `0..=i`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
