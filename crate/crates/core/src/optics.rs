//! Constellation geometry, coherent-state overlaps and keyed phase
//! discrimination.
//!
//! States are kept in polar form (phase index, amplitude). Global phase never
//! matters; every formula below depends on phase differences only.

use std::f64::consts::PI;

use rand::Rng;

use crate::cipher::{encode, Plaintext};
use crate::error::{Error, Result};
use crate::keystream::{Alphabet, SeedKey};

/// M phase-shift states of amplitude `alpha0` (mean photon number alpha0^2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constellation {
    alphabet: Alphabet,
    alpha0: f64,
}

impl Constellation {
    pub fn new(alphabet: Alphabet, alpha0: f64) -> Result<Self> {
        if !(alpha0.is_finite() && alpha0 > 0.0) {
            return Err(Error::InvalidAmplitude(alpha0));
        }
        Ok(Constellation { alphabet, alpha0 })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }
}

/// One transmitted or received symbol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymbolState {
    pub phase_index: u32,
    pub amplitude: f64,
}

/// Overlap magnitude held in log space; magnitudes underflow once the
/// exponent passes roughly -745.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapReport {
    pub log_magnitude: f64,
}

impl OverlapReport {
    pub fn magnitude(&self) -> f64 {
        self.log_magnitude.exp()
    }
}

pub fn phase_of(index: u32, alphabet: Alphabet) -> Result<f64> {
    if index >= alphabet.size() {
        return Err(Error::IndexOutOfRange {
            index: index as u64,
            m: alphabet.size(),
        });
    }
    Ok(2.0 * PI * index as f64 / alphabet.size() as f64)
}

/// Cosine of a phase difference of `steps` constellation positions, exact at
/// quarter turns.
pub fn cos_steps(steps: u32, alphabet: Alphabet) -> f64 {
    let m = alphabet.size();
    let s = steps % m;
    match (4 * s as u64) % m as u64 {
        0 => match (4 * s as u64) / m as u64 {
            0 => 1.0,
            1 => 0.0,
            2 => -1.0,
            _ => 0.0,
        },
        _ => (2.0 * PI * s as f64 / m as f64).cos(),
    }
}

/// Overlap of the two members of an antipodal pair: exp(-2 alpha0^2).
pub fn pair_overlap(alpha0: f64) -> f64 {
    (-2.0 * alpha0 * alpha0).exp()
}

/// |<alpha e^{i theta1} | alpha e^{i theta2}>| for equal amplitudes.
pub fn general_overlap(alpha0: f64, delta_theta: f64) -> OverlapReport {
    OverlapReport {
        log_magnitude: -alpha0 * alpha0 * (1.0 - delta_theta.cos()),
    }
}

/// Overlap of the two n-symbol codewords that encode the same plaintext
/// under two seed keys.
pub fn codeword_overlap(
    seed_a: &SeedKey,
    seed_b: &SeedKey,
    plaintext: &Plaintext,
    constellation: &Constellation,
    n: usize,
) -> Result<OverlapReport> {
    if plaintext.len() < n {
        return Err(Error::LengthMismatch {
            left: plaintext.len(),
            right: n,
        });
    }
    let prefix = plaintext.prefix(n)?;
    let a = encode(seed_a, &prefix, constellation);
    let b = encode(seed_b, &prefix, constellation);
    let alphabet = constellation.alphabet();
    let m = alphabet.size();
    let distance: f64 = a
        .symbols()
        .iter()
        .zip(b.symbols())
        .map(|(x, y)| 1.0 - cos_steps((x.phase_index + m - y.phase_index) % m, alphabet))
        .sum();
    let alpha0 = constellation.alpha0();
    Ok(OverlapReport {
        log_magnitude: -alpha0 * alpha0 * distance,
    })
}

/// Probability that a committed binary phase measurement in a basis
/// misaligned by `delta` returns the wrong pair member, for received
/// amplitude `a` and per-quadrature noise variance 1/2.
pub fn flip_probability(a: f64, delta: f64) -> f64 {
    0.5 * libm::erfc(a * delta.cos())
}

/// Measures one symbol in the basis whose bit-0 phase is `trial_phase_index`.
///
/// Returns the decoded bit: `false` when the in-phase quadrature relative to
/// the trial phase is positive. A correctly keyed receiver therefore recovers
/// the encoded bit with probability `1 - flip_probability(a, 0)`.
pub fn measure_bit<R: Rng + ?Sized>(
    state: &SymbolState,
    trial_phase_index: u32,
    alphabet: Alphabet,
    rng: &mut R,
) -> bool {
    let m = alphabet.size();
    let steps = (state.phase_index + m - trial_phase_index % m) % m;
    let p_one = 0.5 * libm::erfc(state.amplitude * cos_steps(steps, alphabet));
    rng.gen::<f64>() < p_one
}

/// [`measure_bit`] with the M outcome probabilities for one amplitude
/// tabulated up front.
#[derive(Clone, Debug)]
pub struct PhaseDiscriminator {
    alphabet: Alphabet,
    amplitude: f64,
    p_one: Vec<f64>,
}

impl PhaseDiscriminator {
    pub fn new(amplitude: f64, alphabet: Alphabet) -> Self {
        let p_one = (0..alphabet.size())
            .map(|s| 0.5 * libm::erfc(amplitude * cos_steps(s, alphabet)))
            .collect();
        PhaseDiscriminator {
            alphabet,
            amplitude,
            p_one,
        }
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Probability of decoding a 1 when the state sits `steps` positions
    /// ahead of the trial phase.
    pub fn p_one(&self, steps: u32) -> f64 {
        self.p_one[(steps % self.alphabet.size()) as usize]
    }

    #[inline]
    pub fn measure<R: Rng + ?Sized>(
        &self,
        state_phase: u32,
        trial_phase: u32,
        rng: &mut R,
    ) -> bool {
        let mask = self.alphabet.size() - 1;
        let steps = state_phase.wrapping_sub(trial_phase) & mask;
        rng.gen::<f64>() < self.p_one[steps as usize]
    }
}
