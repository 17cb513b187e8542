use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::attacks::{AttackConfig, EnglishModel, Scorer, TrialOrder};
use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::keystream::{Alphabet, MAX_KEY_BITS};
use crate::optics::Constellation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttackKind {
    Exhaustive,
    MultiWindow,
    Prune,
}

impl FromStr for AttackKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(AttackKind::Exhaustive),
            "multiwindow" | "multi-window" => Ok(AttackKind::MultiWindow),
            "prune" | "pruning" => Ok(AttackKind::Prune),
            _ => Err(Error::Parse(format!("unknown attack {s:?}"))),
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackKind::Exhaustive => "exhaustive",
            AttackKind::MultiWindow => "multiwindow",
            AttackKind::Prune => "prune",
        })
    }
}

/// Channel loss, given either as Eve's copy count t or as transmission eta.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Loss {
    Copies(u64),
    Transmission(f64),
}

/// Every knob of a Monte-Carlo experiment.
///
/// The config file format is one `key = value` per line; `#` starts a
/// comment. Keys are the field names below (`M` for the alphabet size).
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub attack: AttackKind,
    pub k: u32,
    pub m: u64,
    pub alpha0: f64,
    pub loss: Loss,
    /// Plaintext bits per window.
    pub n: usize,
    /// Transmission windows under one seed (multi-window attack only).
    pub r: usize,
    pub v: usize,
    pub tau: f64,
    pub b: usize,
    pub scorer: Scorer,
    pub runs: u64,
    pub master_seed: u64,
    pub output_path: Option<PathBuf>,
    pub order: TrialOrder,
    /// Wrap the plaintext in an independent keyed stream before encoding.
    pub double_encryption: bool,
    /// Carry a random pad on the quantum layer and send message xor pad.
    pub otp_variant: bool,
    pub english_pass: f64,
    pub english_weight: f64,
    /// Record wall-clock time per run; off keeps output byte-reproducible.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            attack: AttackKind::Exhaustive,
            k: 12,
            m: 32,
            alpha0: 5.0,
            loss: Loss::Copies(4096),
            n: 4096,
            r: 1,
            v: 128,
            tau: 0.75,
            b: 16,
            scorer: Scorer::KnownPlaintext,
            runs: 100,
            master_seed: 0,
            output_path: None,
            order: TrialOrder::Ascending,
            double_encryption: false,
            otp_variant: false,
            english_pass: 0.8,
            english_weight: 0.5,
            timing: false,
        }
    }
}

pub const CONFIG_KEYS: &[&str] = &[
    "attack",
    "k",
    "M",
    "alpha0",
    "eta",
    "t",
    "n",
    "r",
    "v",
    "tau",
    "b",
    "scorer",
    "runs",
    "master_seed",
    "output_path",
    "order",
    "double_encryption",
    "otp_variant",
    "english_pass",
    "english_weight",
    "timing",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::Parse(format!("{key} = {value:?}: {e}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(Error::Parse(format!(
            "{key} = {value:?}: expected a boolean"
        ))),
    }
}

impl ExperimentConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "attack" => self.attack = value.parse()?,
            "k" => self.k = parse(key, value)?,
            "M" | "m" => self.m = parse(key, value)?,
            "alpha0" => self.alpha0 = parse(key, value)?,
            "eta" => self.loss = Loss::Transmission(parse(key, value)?),
            "t" => self.loss = Loss::Copies(parse(key, value)?),
            "n" => self.n = parse(key, value)?,
            "r" => self.r = parse(key, value)?,
            "v" => self.v = parse(key, value)?,
            "tau" => self.tau = parse(key, value)?,
            "b" => self.b = parse(key, value)?,
            "scorer" => self.scorer = value.parse()?,
            "runs" => self.runs = parse(key, value)?,
            "master_seed" => self.master_seed = parse(key, value)?,
            "output_path" => self.output_path = Some(PathBuf::from(value)),
            "order" => self.order = value.parse()?,
            "double_encryption" => self.double_encryption = parse_bool(key, value)?,
            "otp_variant" => self.otp_variant = parse_bool(key, value)?,
            "english_pass" => self.english_pass = parse(key, value)?,
            "english_weight" => self.english_weight = parse(key, value)?,
            "timing" => self.timing = parse_bool(key, value)?,
            _ => return Err(Error::Parse(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of the current values.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!(
                    "line {}: expected `key = value`, got {raw:?}",
                    lineno + 1
                ))
            })?;
            self.set(key.trim(), value)
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text(&std::fs::read_to_string(path)?)?;
        Ok(cfg)
    }

    pub fn channel(&self) -> Result<ChannelModel> {
        match self.loss {
            Loss::Copies(t) => Ok(ChannelModel::from_copies(t)),
            Loss::Transmission(eta) => ChannelModel::new(eta),
        }
    }

    /// Eve's copy count t.
    pub fn copies(&self) -> Result<u64> {
        Ok(match self.loss {
            Loss::Copies(t) => t,
            Loss::Transmission(_) => self.channel()?.eve_copies(),
        })
    }

    pub fn transmission(&self) -> Result<f64> {
        Ok(self.channel()?.transmission())
    }

    /// Windows actually transmitted: r for the multi-window attack, else 1.
    pub fn windows(&self) -> usize {
        match self.attack {
            AttackKind::MultiWindow => self.r,
            _ => 1,
        }
    }

    pub fn constellation(&self) -> Result<Constellation> {
        Constellation::new(Alphabet::new(self.m)?, self.alpha0)
    }

    pub fn attack_config(&self) -> AttackConfig {
        AttackConfig {
            key_bits: self.k,
            verify_bits: self.v,
            accept_threshold: self.tau,
            prefix_bits: self.b,
            scorer: self.scorer,
            english: EnglishModel {
                pass_threshold: self.english_pass,
                printable_weight: self.english_weight,
            },
            order: self.order,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.k == 0 || self.k > MAX_KEY_BITS {
            return bad(format!("k must lie in 1..=64, got {}", self.k));
        }
        self.constellation()?;
        let t = self.copies()?;
        if t < 1 {
            return bad(
                "the channel leaves the eavesdropper no copies (need eta <= 1/2 or t >= 1)".into(),
            );
        }
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.r == 0 {
            return bad("r must be positive".into());
        }
        if self.r > 1 && self.attack != AttackKind::MultiWindow {
            return bad(format!("r = {} needs attack = multiwindow", self.r));
        }
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        if self.runs >= 1 << 24 {
            return bad(format!("runs must be below 2^24, got {}", self.runs));
        }
        self.attack_config().validate()?;
        if self.v > self.n {
            return bad(format!("v = {} exceeds n = {}", self.v, self.n));
        }
        if self.scorer == Scorer::English && !self.n.is_multiple_of(8) {
            return bad("the english scorer needs n to be a multiple of 8".into());
        }
        if self.otp_variant && self.scorer != Scorer::KnownPlaintext {
            return bad(
                "otp_variant reduces to a known-plaintext attack; use scorer = known".into(),
            );
        }
        let copies = t.checked_mul(self.windows() as u64);
        if copies
            .and_then(|c| c.checked_mul(self.n as u64))
            .is_none_or(|bits| bits > 1 << 36)
        {
            return bad("t * r * n is too large to simulate".into());
        }
        Ok(())
    }
}
