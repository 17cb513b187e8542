//! Addressable random streams.
//!
//! Every draw in an experiment comes from a ChaCha8 stream keyed by the
//! master seed and selected by a 64-bit stream id. The id packs the run
//! number and a lane:
//!
//! ```text
//! stream_id = run_id << 40 | lane
//! lane 0          setup: seed key, plaintexts, pads, inner keys
//! lane 1          Bob's measurements
//! lane 2          trial-key ordering
//! lane 16 + c     Eve's copy c (copies numbered across windows)
//! ```

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LANE_SETUP: u64 = 0;
pub const LANE_BOB: u64 = 1;
pub const LANE_ORDER: u64 = 2;
pub const LANE_COPY_BASE: u64 = 16;

const RUN_SHIFT: u32 = 40;

/// A deterministic random source addressed by (master seed, stream id).
#[derive(Clone, Debug)]
pub struct RngStream {
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_id);
        RngStream { stream_id, inner }
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Position in 32-bit words since the start of the stream.
    pub fn counter(&self) -> u128 {
        self.inner.get_word_pos()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// The streams belonging to one Monte-Carlo run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunStreams {
    master_seed: u64,
    run_id: u64,
}

impl RunStreams {
    pub fn new(master_seed: u64, run_id: u64) -> Self {
        assert!(run_id < 1 << (64 - RUN_SHIFT), "run id {run_id} too large");
        RunStreams {
            master_seed,
            run_id,
        }
    }

    pub fn run_id(&self) -> u64 {
        self.run_id
    }

    pub fn lane(&self, lane: u64) -> RngStream {
        debug_assert!(lane < 1 << RUN_SHIFT);
        RngStream::new(self.master_seed, (self.run_id << RUN_SHIFT) | lane)
    }

    pub fn setup(&self) -> RngStream {
        self.lane(LANE_SETUP)
    }

    pub fn bob(&self) -> RngStream {
        self.lane(LANE_BOB)
    }

    pub fn order(&self) -> RngStream {
        self.lane(LANE_ORDER)
    }

    pub fn copy(&self, copy: u64) -> RngStream {
        self.lane(LANE_COPY_BASE + copy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_address_same_values() {
        let mut a = RunStreams::new(42, 7).copy(3);
        let mut b = RunStreams::new(42, 7).copy(3);
        let xs: Vec<u64> = (0..16).map(|_| a.gen()).collect();
        let ys: Vec<u64> = (0..16).map(|_| b.gen()).collect();
        assert_eq!(xs, ys);
        assert_eq!(a.counter(), 32);
    }

    #[test]
    fn distinct_streams_differ() {
        let s = RunStreams::new(42, 7);
        let mut a = s.copy(0);
        let mut b = s.copy(1);
        let mut c = RunStreams::new(42, 8).copy(0);
        let mut d = RunStreams::new(43, 7).copy(0);
        let first: Vec<u64> = [&mut a, &mut b, &mut c, &mut d]
            .into_iter()
            .map(|r| r.gen())
            .collect();
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(first[i], first[j]);
            }
        }
    }

    #[test]
    fn independent_streams_uncorrelated() {
        let s = RunStreams::new(1, 0);
        let mut a = s.copy(0);
        let mut b = s.copy(1);
        let n = 200_000;
        let agree = (0..n)
            .filter(|_| a.gen::<bool>() == b.gen::<bool>())
            .count();
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((agree as f64 - n as f64 / 2.0).abs() < 5.0 * sigma);
    }
}
