//! Counter-based random streams.
//!
//! A [`RandomStream`] is a `(seed, stream_id, counter)` triple. The value it
//! yields is a pure function of that triple, so any agent can reconstruct its
//! draws for any iteration without touching shared state. This is what makes
//! deterministic-mode results independent of the worker count.
//!
//! [`SharedStream`] is the opposite: one sequence consumed by every worker in
//! whatever order the scheduler produces. It backs the throughput mode.

use std::sync::atomic::{AtomicU64, Ordering};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const SEED_SALT: u64 = 0xD1B5_4A32_D192_ED03;
const STREAM_MUL: u64 = 0xA076_1D64_78BD_642F;

/// SplitMix64 finalizer.
#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn block(seed: u64, stream_id: u64, counter: u64) -> u64 {
    let key = mix64(mix64(seed ^ SEED_SALT) ^ stream_id.wrapping_mul(STREAM_MUL));
    mix64(key.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

#[inline]
fn to_unit(bits: u64) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    (bits >> 11) as f64 * SCALE
}

/// Anything that can hand out uniform variates in `[0, 1)`.
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;

    /// Uniform index in `0..n`. `n` must be non-zero.
    fn next_index(&mut self, n: usize) -> usize {
        let idx = (self.next_uniform() * n as f64) as usize;
        idx.min(n - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomStream {
    pub seed: u64,
    pub stream_id: u64,
    pub counter: u64,
}

impl RandomStream {
    pub const fn new(seed: u64, stream_id: u64, counter: u64) -> Self {
        Self {
            seed,
            stream_id,
            counter,
        }
    }

    /// Raw 64-bit output at the current position, without advancing.
    pub fn peek_u64(&self) -> u64 {
        block(self.seed, self.stream_id, self.counter)
    }

    /// Next uniform variate and the stream advanced by one step.
    pub fn uniform(self) -> (f64, RandomStream) {
        let value = to_unit(self.peek_u64());
        (
            value,
            RandomStream {
                counter: self.counter.wrapping_add(1),
                ..self
            },
        )
    }

    /// Same stream, repositioned.
    pub fn at(self, counter: u64) -> RandomStream {
        RandomStream { counter, ..self }
    }
}

impl UniformSource for RandomStream {
    fn next_uniform(&mut self) -> f64 {
        let (value, next) = self.uniform();
        *self = next;
        value
    }
}

/// A single sequence shared between workers through an atomic counter.
///
/// Each draw claims the next counter value, so the set of values handed out
/// is fixed by the seed but which worker receives which value is not.
#[derive(Debug)]
pub struct SharedStream {
    seed: u64,
    counter: AtomicU64,
}

/// Stream id reserved for the shared sequence.
pub const SHARED_STREAM_ID: u64 = u64::MAX;

impl SharedStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            counter: AtomicU64::new(0),
        }
    }

    pub fn draw(&self) -> f64 {
        let counter = self.counter.fetch_add(1, Ordering::Relaxed);
        to_unit(block(self.seed, SHARED_STREAM_ID, counter))
    }

    /// Number of values handed out so far.
    pub fn consumed(&self) -> u64 {
        self.counter.load(Ordering::Relaxed)
    }

    pub fn handle(&self) -> SharedHandle<'_> {
        SharedHandle { shared: self }
    }
}

/// Borrowed view of a [`SharedStream`] usable as a [`UniformSource`].
#[derive(Debug, Clone, Copy)]
pub struct SharedHandle<'a> {
    shared: &'a SharedStream,
}

impl UniformSource for SharedHandle<'_> {
    fn next_uniform(&mut self) -> f64 {
        self.shared.draw()
    }
}
