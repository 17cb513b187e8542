//! Attack engines against the mesoscopic cipher.
//!
//! All engines work on copies obtained by [`eve_intercept`](crate::channel::eve_intercept)
//! and spend them through the tap's consumption grants, so every outcome's
//! resource counts reconcile with the channel bookkeeping.

mod english;
mod grover;
mod pruning;
mod search;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::keystream::{SeedKey, MAX_KEY_BITS};

pub use english::{english_score, is_printable_english, EnglishModel, ENGLISH_REFERENCE};
pub use grover::{
    grover_angle, grover_estimate, grover_success_prob, grover_success_prob_recurrence,
    optimal_iterations, GroverEstimate,
};
pub use pruning::pruning_search;
pub use search::{
    exhaustive_search, multi_window_attack, trial_keys, verify_trial_key, Verification,
};

/// How Eve recognises the right key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scorer {
    /// Bitwise agreement with a known plaintext.
    KnownPlaintext,
    /// Redundancy of English text; no plaintext needed.
    English,
}

impl FromStr for Scorer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "known" | "known-plaintext" => Ok(Scorer::KnownPlaintext),
            "english" | "english-model" => Ok(Scorer::English),
            _ => Err(Error::Parse(format!("unknown scorer {s:?}"))),
        }
    }
}

impl fmt::Display for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scorer::KnownPlaintext => "known",
            Scorer::English => "english",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrialOrder {
    Ascending,
    /// Distinct keys in an order drawn from the run's ordering stream.
    Random,
}

impl FromStr for TrialOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascending" => Ok(TrialOrder::Ascending),
            "random" => Ok(TrialOrder::Random),
            _ => Err(Error::Parse(format!("unknown trial order {s:?}"))),
        }
    }
}

impl fmt::Display for TrialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrialOrder::Ascending => "ascending",
            TrialOrder::Random => "random",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AttackConfig {
    /// Seed-key length k; trial keys range over 0..2^k.
    pub key_bits: u32,
    /// Symbols measured for a full verification (v).
    pub verify_bits: usize,
    /// Accept when the agreement reaches this fraction (tau).
    pub accept_threshold: f64,
    /// Symbols per pruning stage (b).
    pub prefix_bits: usize,
    pub scorer: Scorer,
    pub english: EnglishModel,
    pub order: TrialOrder,
}

impl AttackConfig {
    pub fn new(key_bits: u32) -> Self {
        AttackConfig {
            key_bits,
            verify_bits: 128,
            accept_threshold: 0.75,
            prefix_bits: 16,
            scorer: Scorer::KnownPlaintext,
            english: EnglishModel::default(),
            order: TrialOrder::Ascending,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.key_bits == 0 || self.key_bits > MAX_KEY_BITS {
            return Err(Error::InvalidKeyLength(self.key_bits));
        }
        if self.verify_bits == 0 {
            return Err(Error::Config("v must be positive".into()));
        }
        if !(self.accept_threshold > 0.5 && self.accept_threshold < 1.0) {
            return Err(Error::Config(format!(
                "tau must lie in (0.5, 1), got {}",
                self.accept_threshold
            )));
        }
        if self.prefix_bits == 0 || self.prefix_bits > self.verify_bits {
            return Err(Error::Config(format!(
                "b must lie in 1..=v, got b = {} with v = {}",
                self.prefix_bits, self.verify_bits
            )));
        }
        if self.scorer == Scorer::English
            && (!self.prefix_bits.is_multiple_of(8) || !self.verify_bits.is_multiple_of(8))
        {
            return Err(Error::Config(
                "the english scorer needs b and v to be multiples of 8".into(),
            ));
        }
        self.english.validate()
    }

    /// Size of the trial-key space, 2^k.
    pub fn key_space(&self) -> u128 {
        1u128 << self.key_bits
    }
}

/// What an attack recovered and what it spent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AttackOutcome {
    pub recovered: Option<SeedKey>,
    pub trials_tested: u64,
    pub copies_consumed: u64,
    pub symbols_consumed: u64,
}

impl AttackOutcome {
    pub fn is_success(&self, truth: &SeedKey) -> bool {
        self.recovered.as_ref() == Some(truth)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let ok = AttackConfig::new(12);
        assert!(ok.validate().is_ok());
        for tau in [0.5, 1.0, 0.2] {
            let cfg = AttackConfig {
                accept_threshold: tau,
                ..ok
            };
            assert!(cfg.validate().is_err());
        }
        let cfg = AttackConfig {
            prefix_bits: 256,
            ..ok
        };
        assert!(cfg.validate().is_err());
        let cfg = AttackConfig {
            prefix_bits: 12,
            scorer: Scorer::English,
            ..ok
        };
        assert!(cfg.validate().is_err());
        assert!(AttackConfig::new(0).validate().is_err());
        assert!(AttackConfig::new(65).validate().is_err());
    }

    #[test]
    fn names_parse() {
        assert_eq!("known".parse::<Scorer>().unwrap(), Scorer::KnownPlaintext);
        assert_eq!("english".parse::<Scorer>().unwrap(), Scorer::English);
        assert!("klingon".parse::<Scorer>().is_err());
        assert_eq!("random".parse::<TrialOrder>().unwrap(), TrialOrder::Random);
        assert_eq!(Scorer::English.to_string(), "english");
    }
}
