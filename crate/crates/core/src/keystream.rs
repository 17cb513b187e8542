//! Seed-key expansion.
//!
//! The running key comes from a 64-bit Fibonacci LFSR with feedback
//! polynomial x^64 + x^63 + x^61 + x^60 + 1. Each step XORs register bits
//! 63, 62, 60 and 59, shifts left by one and feeds the result into bit 0; the
//! feedback bit is also the emitted keystream bit. An M-ary symbol is
//! log2(M) consecutive emitted bits, first bit most significant.
//!
//! Seeding places the k key bits in the low end of the register and XORs
//! with `0xA5A5_A5A5_A5A5_A5A5`. Because the generator is linear, two seeds
//! produce keystreams whose XOR is the LFSR output started from `k1 ^ k2`, a
//! very sparse register. With only four clustered taps that difference stays
//! mostly zero for the first thousand or so bits. [`expand_running_key`]
//! therefore advances the seeded register by 2^32 steps (a precomputed GF(2)
//! jump) before emitting symbols.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const SEED_MASK: u64 = 0xA5A5_A5A5_A5A5_A5A5;

/// log2 of the number of generator steps discarded after seeding.
pub const WARMUP_LOG2: u32 = 32;

pub const MAX_KEY_BITS: u32 = 64;

/// Largest supported alphabet is 2^16 symbols.
pub const MAX_ALPHABET_BITS: u32 = 16;

/// The k-bit shared secret.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeedKey {
    value: u64,
    len: u32,
}

impl SeedKey {
    pub fn new(value: u64, len: u32) -> Result<Self> {
        if len == 0 || len > MAX_KEY_BITS {
            return Err(Error::InvalidKeyLength(len));
        }
        if len < 64 && value >> len != 0 {
            return Err(Error::KeyOverflow { value, bits: len });
        }
        Ok(SeedKey { value, len })
    }

    /// Builds a key from an MSB-first bit sequence; k is the sequence length.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let len = u32::try_from(bits.len()).map_err(|_| Error::InvalidKeyLength(u32::MAX))?;
        if len == 0 || len > MAX_KEY_BITS {
            return Err(Error::InvalidKeyLength(len));
        }
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        SeedKey::new(value, len)
    }

    /// Parses an MSB-first hexadecimal key with an explicit bit length.
    pub fn from_hex(hex: &str, len: u32) -> Result<Self> {
        let digits = hex.trim().trim_start_matches("0x");
        let value = u64::from_str_radix(digits, 16)
            .map_err(|e| Error::Parse(format!("bad hex key {hex:?}: {e}")))?;
        SeedKey::new(value, len)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len)
            .rev()
            .map(|i| (self.value >> i) & 1 == 1)
            .collect()
    }

    pub fn to_hex(&self) -> String {
        format!("{:x}", self.value)
    }
}

impl fmt::Display for SeedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}/{}", self.value, self.len)
    }
}

/// Number of running-key symbols M, a power of two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    bits: u32,
}

impl Alphabet {
    pub fn new(size: u64) -> Result<Self> {
        if size < 2 || !size.is_power_of_two() || size.trailing_zeros() > MAX_ALPHABET_BITS {
            return Err(Error::UnsupportedAlphabet(size));
        }
        Ok(Alphabet {
            bits: size.trailing_zeros(),
        })
    }

    pub fn size(&self) -> u32 {
        1 << self.bits
    }

    /// Keystream bits per symbol.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn half(&self) -> u32 {
        self.size() / 2
    }

    /// Hex digits used per symbol in the golden-vector format.
    pub fn hex_width(&self) -> usize {
        self.bits.div_ceil(4) as usize
    }
}

/// 64x64 matrix over GF(2), stored as the images of the unit vectors.
#[derive(Clone)]
struct Gf2Matrix([u64; 64]);

impl Gf2Matrix {
    fn lfsr_step() -> Self {
        let mut cols = [0u64; 64];
        for (j, col) in cols.iter_mut().enumerate() {
            *col = GeneratorState { register: 1 << j }.step().1.register;
        }
        Gf2Matrix(cols)
    }

    fn apply(&self, mut v: u64) -> u64 {
        let mut out = 0;
        while v != 0 {
            let j = v.trailing_zeros();
            out ^= self.0[j as usize];
            v &= v - 1;
        }
        out
    }

    fn square(&self) -> Self {
        let mut cols = [0u64; 64];
        for (j, col) in cols.iter_mut().enumerate() {
            *col = self.apply(self.0[j]);
        }
        Gf2Matrix(cols)
    }
}

/// `POWERS[i]` advances the register by 2^i steps.
fn step_powers() -> &'static [Gf2Matrix] {
    static POWERS: OnceLock<Vec<Gf2Matrix>> = OnceLock::new();
    POWERS.get_or_init(|| {
        let mut powers = Vec::with_capacity(64);
        powers.push(Gf2Matrix::lfsr_step());
        for i in 1..64 {
            let next = powers[i - 1].square();
            powers.push(next);
        }
        powers
    })
}

/// The 64-bit LFSR register. Never all-zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorState {
    register: u64,
}

impl GeneratorState {
    /// Returns `None` for the all-zero register, which is a fixed point.
    pub fn from_register(register: u64) -> Option<Self> {
        (register != 0).then_some(GeneratorState { register })
    }

    pub fn register(&self) -> u64 {
        self.register
    }

    /// One LFSR step: returns the emitted feedback bit and the new state.
    #[inline]
    pub fn step(self) -> (bool, Self) {
        let r = self.register;
        let fb = ((r >> 63) ^ (r >> 62) ^ (r >> 60) ^ (r >> 59)) & 1;
        (
            fb == 1,
            GeneratorState {
                register: (r << 1) | fb,
            },
        )
    }

    #[inline]
    pub fn next_symbol(self, alphabet: Alphabet) -> (u32, Self) {
        let mut state = self;
        let mut symbol = 0u32;
        for _ in 0..alphabet.bits() {
            let (bit, next) = state.step();
            symbol = (symbol << 1) | bit as u32;
            state = next;
        }
        (symbol, state)
    }

    /// Equivalent to calling [`step`](Self::step) `steps` times.
    pub fn advance(self, steps: u64) -> Self {
        let powers = step_powers();
        let mut register = self.register;
        let mut rest = steps;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            register = powers[i].apply(register);
            rest &= rest - 1;
        }
        GeneratorState { register }
    }
}

/// Places the key in the low k bits and XORs with [`SEED_MASK`].
///
/// The single 64-bit key equal to the mask would give the all-zero register;
/// it is mapped to register 1 instead.
pub fn seed_generator(key: &SeedKey) -> GeneratorState {
    let register = key.value ^ SEED_MASK;
    GeneratorState {
        register: if register == 0 { 1 } else { register },
    }
}

/// Checked single-symbol draw for callers holding a raw alphabet size.
pub fn next_symbol(state: GeneratorState, alphabet_size: u64) -> Result<(u32, GeneratorState)> {
    let alphabet = Alphabet::new(alphabet_size)?;
    Ok(state.next_symbol(alphabet))
}

/// Generator state positioned at running-key symbol 0.
pub fn keystream_origin(key: &SeedKey) -> GeneratorState {
    seed_generator(key).advance(1 << WARMUP_LOG2)
}

/// The M-ary expansion of a seed key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunningKey {
    symbols: Vec<u32>,
    alphabet: Alphabet,
}

impl RunningKey {
    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn to_hex(&self) -> String {
        let width = self.alphabet.hex_width();
        self.symbols
            .iter()
            .map(|s| format!("{s:0width$x}"))
            .collect()
    }
}

pub fn expand_running_key(key: &SeedKey, alphabet: Alphabet, n: usize) -> RunningKey {
    RunningKey {
        symbols: running_key_window(key, alphabet, 0, n),
        alphabet,
    }
}

/// Running-key symbols `offset..offset + len` without generating the prefix.
pub fn running_key_window(
    key: &SeedKey,
    alphabet: Alphabet,
    offset: usize,
    len: usize,
) -> Vec<u32> {
    let mut state = keystream_origin(key).advance(offset as u64 * alphabet.bits() as u64);
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let (symbol, next) = state.next_symbol(alphabet);
        out.push(symbol);
        state = next;
    }
    out
}

/// XORs `data` with the binary keystream of `key2`. An involution.
pub fn stream_xor(key2: &SeedKey, data: &[bool]) -> Vec<bool> {
    let mut state = keystream_origin(key2);
    data.iter()
        .map(|&d| {
            let (bit, next) = state.step();
            state = next;
            d ^ bit
        })
        .collect()
}
