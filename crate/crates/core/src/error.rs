use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("seed key length must be between 1 and 64 bits, got {0}")]
    InvalidKeyLength(u32),

    #[error("seed key value {value:#x} does not fit in {bits} bits")]
    KeyOverflow { value: u64, bits: u32 },

    #[error("unsupported alphabet size {0}: must be a power of two between 2 and 65536")]
    UnsupportedAlphabet(u64),

    #[error("phase index {index} out of range for M = {m}")]
    IndexOutOfRange { index: u64, m: u32 },

    #[error("amplitude must be positive and finite, got {0}")]
    InvalidAmplitude(f64),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("input is empty")]
    EmptyInput,

    #[error("channel transmission must lie in (0, 1], got {0}")]
    InvalidTransmission(f64),

    #[error("the eavesdropper needs at least one copy, got t = {0}")]
    NoCopies(u64),

    #[error("copy {copy}, symbol {symbol} is outside the tap")]
    TapIndex { copy: usize, symbol: usize },

    #[error("copy {copy}, symbol {symbol} was already measured")]
    AlreadyConsumed { copy: usize, symbol: usize },

    #[error("copy {copy} has {available} unmeasured symbols, {needed} needed")]
    ResourceExhausted {
        copy: usize,
        available: usize,
        needed: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than a runtime fault.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Io(_) | Error::Csv(_) | Error::AlreadyConsumed { .. } | Error::TapIndex { .. }
        )
    }
}
