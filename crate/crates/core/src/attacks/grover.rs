//! Cost model for a quantum key search over one intercepted copy.
//!
//! With a known plaintext, a single copy of the codeword suffices: for long
//! running keys the codewords of different seeds are nearly orthogonal, so
//! an oracle marking the right seed exists. Eve can keep one copy as good as
//! Bob's whenever the channel transmits at most half the light.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::keystream::MAX_KEY_BITS;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroverEstimate {
    /// N = 2^k.
    pub search_space: u128,
    /// j* = floor(pi / (4 theta)).
    pub iterations: u64,
    pub success_prob: f64,
    /// Eve can hold a copy at least as strong as Bob's (eta <= 1/2).
    pub feasible: bool,
}

/// theta = arcsin(1 / sqrt(N)).
pub fn grover_angle(search_space: u128) -> f64 {
    (1.0 / (search_space as f64).sqrt()).asin()
}

pub fn optimal_iterations(search_space: u128) -> u64 {
    let ratio = PI / (4.0 * grover_angle(search_space));
    // N = 2 gives exactly 1 up to rounding
    (ratio + 1e-9).floor() as u64
}

/// sin^2((2j + 1) theta).
pub fn grover_success_prob(search_space: u128, iterations: u64) -> f64 {
    let theta = grover_angle(search_space);
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// Same quantity by explicit amplitude bookkeeping: one marked item with
/// amplitude `good`, N - 1 unmarked items sharing amplitude `bad`. Each
/// iteration flips the marked sign, then inverts every amplitude about the
/// mean.
pub fn grover_success_prob_recurrence(search_space: u128, iterations: u64) -> f64 {
    let n = search_space as f64;
    let mut good = 1.0 / n.sqrt();
    let mut bad = good;
    for _ in 0..iterations {
        let flipped = -good;
        let mean = (flipped + (n - 1.0) * bad) / n;
        good = 2.0 * mean - flipped;
        bad = 2.0 * mean - bad;
    }
    good * good
}

pub fn grover_estimate(key_bits: u32, transmission: f64) -> Result<GroverEstimate> {
    if key_bits == 0 || key_bits > MAX_KEY_BITS {
        return Err(Error::InvalidKeyLength(key_bits));
    }
    if !(transmission > 0.0 && transmission <= 1.0) {
        return Err(Error::InvalidTransmission(transmission));
    }
    let search_space = 1u128 << key_bits;
    let iterations = optimal_iterations(search_space);
    Ok(GroverEstimate {
        search_space,
        iterations,
        success_prob: grover_success_prob(search_space, iterations),
        feasible: transmission <= 0.5,
    })
}
