//! Alice's encoder, Bob's decoder and the key-generation variant in which the
//! quantum layer only carries a random pad R and the message travels
//! classically as C = R xor message.

use std::io::{Read, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::xor_bits;
use crate::error::{Error, Result};
use crate::keystream::{expand_running_key, SeedKey};
use crate::optics::{Constellation, PhaseDiscriminator, SymbolState};

/// Non-empty bit string, MSB-first when built from bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plaintext(Vec<bool>);

impl Plaintext {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Plaintext(bits))
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        Plaintext::new(crate::bits::bytes_to_bits(bytes))
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Plaintext::new((0..n).map(|_| rng.gen::<bool>()).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prefix(&self, n: usize) -> Result<Plaintext> {
        if n > self.0.len() {
            return Err(Error::LengthMismatch {
                left: self.0.len(),
                right: n,
            });
        }
        Plaintext::new(self.0[..n].to_vec())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        crate::bits::bits_to_bytes(&self.0)
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }
}

/// The transmitted codeword, one coherent state per plaintext bit.
#[derive(Clone, Debug, PartialEq)]
pub struct SignalSequence {
    symbols: Vec<SymbolState>,
    constellation: Constellation,
}

#[derive(Debug, Serialize, Deserialize)]
struct SignalRow {
    index: usize,
    phase_index: u32,
    amplitude: f64,
}

impl SignalSequence {
    pub fn symbols(&self) -> &[SymbolState] {
        &self.symbols
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Amplitude shared by every symbol (0 for an empty sequence).
    pub fn amplitude(&self) -> f64 {
        self.symbols.first().map_or(0.0, |s| s.amplitude)
    }

    /// Copy of the sequence with every amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> SignalSequence {
        SignalSequence {
            symbols: self
                .symbols
                .iter()
                .map(|s| SymbolState {
                    phase_index: s.phase_index,
                    amplitude: s.amplitude * factor,
                })
                .collect(),
            constellation: self.constellation,
        }
    }

    /// Writes `index,phase_index,amplitude` lines with a header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for (index, s) in self.symbols.iter().enumerate() {
            w.serialize(SignalRow {
                index,
                phase_index: s.phase_index,
                amplitude: s.amplitude,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R, constellation: Constellation) -> Result<SignalSequence> {
        let mut r = csv::Reader::from_reader(reader);
        let m = constellation.alphabet().size();
        let mut symbols = Vec::new();
        for (expected, row) in r.deserialize::<SignalRow>().enumerate() {
            let row = row?;
            if row.index != expected {
                return Err(Error::Parse(format!(
                    "signal row {expected} has index {}",
                    row.index
                )));
            }
            if row.phase_index >= m {
                return Err(Error::IndexOutOfRange {
                    index: row.phase_index as u64,
                    m,
                });
            }
            if !(row.amplitude.is_finite() && row.amplitude >= 0.0) {
                return Err(Error::InvalidAmplitude(row.amplitude));
            }
            symbols.push(SymbolState {
                phase_index: row.phase_index,
                amplitude: row.amplitude,
            });
        }
        if symbols.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(SignalSequence {
            symbols,
            constellation,
        })
    }
}

/// Symbol i gets phase index K'_i for a 0 bit and K'_i + M/2 for a 1 bit.
pub fn encode(seed: &SeedKey, x: &Plaintext, constellation: &Constellation) -> SignalSequence {
    let alphabet = constellation.alphabet();
    let running = expand_running_key(seed, alphabet, x.len());
    let mask = alphabet.size() - 1;
    let symbols = running
        .symbols()
        .iter()
        .zip(x.bits())
        .map(|(&k, &bit)| SymbolState {
            phase_index: (k + bit as u32 * alphabet.half()) & mask,
            amplitude: constellation.alpha0(),
        })
        .collect();
    SignalSequence {
        symbols,
        constellation: *constellation,
    }
}

/// Measures every received symbol in the basis chosen by the true running key.
pub fn bob_decode<R: Rng + ?Sized>(
    seed: &SeedKey,
    received: &SignalSequence,
    rng: &mut R,
) -> Plaintext {
    let alphabet = received.constellation().alphabet();
    let running = expand_running_key(seed, alphabet, received.len());
    let receiver = PhaseDiscriminator::new(received.amplitude(), alphabet);
    let bits = received
        .symbols()
        .iter()
        .zip(running.symbols())
        .map(|(s, &k)| receiver.measure(s.phase_index, k, rng))
        .collect();
    Plaintext(bits)
}

/// Classical half of the key-generation variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OtpSession {
    /// The pad R carried by the quantum layer.
    pub pad: Vec<bool>,
    /// C = R xor message.
    pub ciphertext: Vec<bool>,
}

pub fn otp_generate_and_wrap<R: Rng + ?Sized>(
    seed: &SeedKey,
    pad_length: usize,
    message: &[bool],
    constellation: &Constellation,
    rng: &mut R,
) -> Result<(SignalSequence, OtpSession)> {
    if pad_length != message.len() {
        return Err(Error::LengthMismatch {
            left: pad_length,
            right: message.len(),
        });
    }
    let pad = Plaintext::random(pad_length, rng)?;
    let ciphertext = xor_bits(pad.bits(), message)?;
    let signal = encode(seed, &pad, constellation);
    Ok((
        signal,
        OtpSession {
            pad: pad.into_bits(),
            ciphertext,
        },
    ))
}

/// Known message and ciphertext of the variant give R, the plaintext of the
/// underlying quantum transmission.
pub fn variant_reduce_known_plaintext(ciphertext: &[bool], message: &[bool]) -> Result<Vec<bool>> {
    xor_bits(ciphertext, message)
}
