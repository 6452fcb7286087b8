//! Counter-based random streams.
//!
//! [`RngStream`] wraps the Philox4x32-10 block function: the 64-bit seed is
//! the key, and the 128-bit counter is split into a 64-bit stream id and a
//! 64-bit block index. A stream's output is therefore a pure function of
//! `(seed, stream_id, position)`, identical on every platform, and distinct
//! stream ids give non-overlapping sequences.
//!
//! Parallel Monte Carlo code calls [`RngStream::fork`] once and hands
//! `family.child(i)` to work unit `i`, so results never depend on how units
//! are scheduled across threads.

use rand_core::RngCore;
use rand_distr::{Distribution, StandardNormal};

const PHILOX_M0: u32 = 0xD251_1F53;
const PHILOX_M1: u32 = 0xCD9E_8D57;
const PHILOX_W0: u32 = 0x9E37_79B9;
const PHILOX_W1: u32 = 0xBB67_AE85;

#[inline]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let p = u64::from(a) * u64::from(b);
    ((p >> 32) as u32, p as u32)
}

/// Philox4x32 with 10 rounds.
pub fn philox4x32_10(counter: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let mut ctr = counter;
    let mut k = key;
    for round in 0..10 {
        if round > 0 {
            k[0] = k[0].wrapping_add(PHILOX_W0);
            k[1] = k[1].wrapping_add(PHILOX_W1);
        }
        let (hi0, lo0) = mulhilo(PHILOX_M0, ctr[0]);
        let (hi1, lo1) = mulhilo(PHILOX_M1, ctr[2]);
        ctr = [hi1 ^ ctr[1] ^ k[0], lo1, hi0 ^ ctr[3] ^ k[1], lo0];
    }
    ctr
}

/// SplitMix64 finalizer, used to derive child stream ids.
#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A reproducible random stream identified by `(seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    block: u64,
    buf: [u32; 4],
    pos: usize,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self {
            seed,
            stream_id,
            block: 0,
            buf: [0; 4],
            pos: 4,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Derives a fresh family of child streams, advancing this stream by one draw.
    pub fn fork(&mut self) -> StreamFamily {
        StreamFamily {
            seed: self.seed,
            base: self.next_u64(),
        }
    }

    fn refill(&mut self) {
        let counter = [
            self.block as u32,
            (self.block >> 32) as u32,
            self.stream_id as u32,
            (self.stream_id >> 32) as u32,
        ];
        let key = [self.seed as u32, (self.seed >> 32) as u32];
        self.buf = philox4x32_10(counter, key);
        self.block = self.block.wrapping_add(1);
        self.pos = 0;
    }

    /// Uniform on the open interval (0, 1), with 53 bits of resolution.
    ///
    /// Values are `(k + 0.5) / 2^53`, so neither endpoint nor exactly `0.5`
    /// is ever returned.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(self)
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        if self.pos == 4 {
            self.refill();
        }
        let v = self.buf[self.pos];
        self.pos += 1;
        v
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        let lo = u64::from(self.next_u32());
        let hi = u64::from(self.next_u32());
        (hi << 32) | lo
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(4) {
            let bytes = self.next_u32().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}

/// Child streams derived from one fork of a parent stream.
#[derive(Debug, Clone, Copy)]
pub struct StreamFamily {
    seed: u64,
    base: u64,
}

impl StreamFamily {
    pub fn child(&self, index: u64) -> RngStream {
        RngStream::new(self.seed, mix64(self.base ^ mix64(index.wrapping_add(0x9E37_79B9_7F4A_7C15))))
    }
}

/// Draws per work unit in bulk sampling.
pub(crate) const SAMPLE_BLOCK: usize = 8192;

/// Fills `n` values in fixed-size work units, each on its own child stream.
///
/// `draw` produces one value and reports how many internal redraws it needed.
/// Unit boundaries depend only on `n`, so the output is identical for any
/// thread count.
pub(crate) fn par_fill<F>(rng: &mut RngStream, n: usize, draw: F) -> (Vec<f64>, u64)
where
    F: Fn(&mut RngStream) -> (f64, u64) + Sync,
{
    use rayon::prelude::*;

    let family = rng.fork();
    let units = n.div_ceil(SAMPLE_BLOCK);
    let parts: Vec<(Vec<f64>, u64)> = (0..units)
        .into_par_iter()
        .map(|u| {
            let mut child = family.child(u as u64);
            let len = SAMPLE_BLOCK.min(n - u * SAMPLE_BLOCK);
            let mut out = Vec::with_capacity(len);
            let mut redraws = 0;
            for _ in 0..len {
                let (v, r) = draw(&mut child);
                out.push(v);
                redraws += r;
            }
            (out, redraws)
        })
        .collect();
    let mut values = Vec::with_capacity(n);
    let mut redraws = 0;
    for (part, r) in parts {
        values.extend(part);
        redraws += r;
    }
    (values, redraws)
}

/// Maps replication indices `0..reps` to results, replication `i` on `family.child(i)`.
pub(crate) fn par_replicate<T, F>(family: StreamFamily, reps: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RngStream) -> T + Sync,
{
    use rayon::prelude::*;

    (0..reps)
        .into_par_iter()
        .map(|i| f(&mut family.child(i as u64)))
        .collect()
}
