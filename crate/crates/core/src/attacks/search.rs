use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{AttackConfig, AttackOutcome, Scorer, TrialOrder};
use crate::bits::bits_to_bytes;
use crate::channel::EveTap;
use crate::cipher::Plaintext;
use crate::error::{Error, Result};
use crate::keystream::{running_key_window, SeedKey};
use crate::optics::PhaseDiscriminator;
use crate::stream::RunStreams;

/// Result of checking one trial key against one copy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verification {
    pub accept: bool,
    /// Fraction of decoded bits matching the reference, or the English score.
    pub agreement: f64,
}

/// The first `count` trial keys in the configured order. Keys are distinct.
pub fn trial_keys<R: Rng + ?Sized>(cfg: &AttackConfig, count: u64, rng: &mut R) -> Vec<u64> {
    let space = cfg.key_space();
    let count = (count as u128).min(space) as u64;
    match cfg.order {
        TrialOrder::Ascending => (0..count).collect(),
        TrialOrder::Random if space <= 1 << 26 => {
            let mut all: Vec<u64> = (0..space as u64).collect();
            let (picked, _) = all.partial_shuffle(rng, count as usize);
            picked.to_vec()
        }
        TrialOrder::Random => {
            let mut seen = HashSet::with_capacity(count as usize);
            let mut out = Vec::with_capacity(count as usize);
            let mask = if cfg.key_bits == 64 {
                u64::MAX
            } else {
                (1u64 << cfg.key_bits) - 1
            };
            while (out.len() as u64) < count {
                let key = rng.gen::<u64>() & mask;
                if seen.insert(key) {
                    out.push(key);
                }
            }
            out
        }
    }
}

pub(super) fn receiver_for(tap: &EveTap) -> PhaseDiscriminator {
    let signal = tap.copy(0).expect("tap has at least one copy");
    PhaseDiscriminator::new(signal.amplitude(), signal.constellation().alphabet())
}

/// Measures symbols `start..start + len` of a copy in the trial key's bases.
pub(super) fn decode_span<R: Rng + ?Sized>(
    tap: &mut EveTap,
    copy: usize,
    start: usize,
    len: usize,
    trial: &SeedKey,
    receiver: &PhaseDiscriminator,
    rng: &mut R,
) -> Result<Vec<bool>> {
    let alphabet = tap.copy(copy)?.constellation().alphabet();
    let bases = running_key_window(trial, alphabet, start, len);
    bases
        .iter()
        .enumerate()
        .map(|(i, &basis)| tap.measure(copy, start + i, basis, receiver, rng))
        .collect()
}

pub(super) fn agreement(decoded: &[bool], reference: &[bool]) -> f64 {
    let same = decoded
        .iter()
        .zip(reference)
        .filter(|(a, b)| a == b)
        .count();
    same as f64 / decoded.len() as f64
}

fn known_reference<'a>(
    reference: Option<&'a Plaintext>,
    cfg: &AttackConfig,
) -> Result<Option<&'a Plaintext>> {
    match (cfg.scorer, reference) {
        (Scorer::KnownPlaintext, None) => Err(Error::Config(
            "the known-plaintext scorer needs a reference plaintext".into(),
        )),
        (Scorer::KnownPlaintext, Some(r)) => Ok(Some(r)),
        (Scorer::English, _) => Ok(None),
    }
}

fn verify_with<R: Rng + ?Sized>(
    tap: &mut EveTap,
    copy: usize,
    trial: &SeedKey,
    reference: Option<&Plaintext>,
    cfg: &AttackConfig,
    receiver: &PhaseDiscriminator,
    rng: &mut R,
) -> Result<Verification> {
    let v = cfg.verify_bits;
    if tap.len() < v {
        return Err(Error::ResourceExhausted {
            copy,
            available: tap.len(),
            needed: v,
        });
    }
    for i in 0..v {
        if tap.is_consumed(copy, i)? {
            return Err(Error::ResourceExhausted {
                copy,
                available: tap.unconsumed_in_copy(copy)?,
                needed: v,
            });
        }
    }
    let reference = known_reference(reference, cfg)?;
    if let Some(r) = reference {
        if r.len() < v {
            return Err(Error::LengthMismatch {
                left: r.len(),
                right: v,
            });
        }
    }
    let decoded = decode_span(tap, copy, 0, v, trial, receiver, rng)?;
    Ok(match reference {
        Some(r) => {
            let agreement = agreement(&decoded, &r.bits()[..v]);
            Verification {
                accept: agreement >= cfg.accept_threshold,
                agreement,
            }
        }
        None => {
            let score = cfg.english.score(&bits_to_bytes(&decoded))?;
            Verification {
                accept: score >= cfg.english.pass_threshold,
                agreement: score,
            }
        }
    })
}

/// Measures the first v symbols of a fresh copy under a trial key and scores
/// the decoded bits.
pub fn verify_trial_key<R: Rng + ?Sized>(
    tap: &mut EveTap,
    copy: usize,
    trial: &SeedKey,
    reference: Option<&Plaintext>,
    cfg: &AttackConfig,
    rng: &mut R,
) -> Result<Verification> {
    let receiver = receiver_for(tap);
    verify_with(tap, copy, trial, reference, cfg, &receiver, rng)
}

/// One trial key per copy, copies numbered window-major across `windows`.
/// A copy used for a trial is spent whole, including the symbols beyond the
/// verification span.
fn search_windows(
    windows: &mut [EveTap],
    references: &[Option<&Plaintext>],
    cfg: &AttackConfig,
    streams: &RunStreams,
) -> Result<AttackOutcome> {
    cfg.validate()?;
    let total_copies: u64 = windows.iter().map(|w| w.copies() as u64).sum();
    let keys = trial_keys(cfg, total_copies, &mut streams.order());
    let grants_before: u64 = windows.iter().map(EveTap::grants).sum();

    let mut outcome = AttackOutcome::default();
    let mut global = 0u64;
    'windows: for (w, tap) in windows.iter_mut().enumerate() {
        let receiver = receiver_for(tap);
        let reference = references.get(w).copied().flatten();
        for copy in 0..tap.copies() {
            let Some(&key) = keys.get(global as usize) else {
                break 'windows;
            };
            let trial = SeedKey::new(key, cfg.key_bits)?;
            let mut rng = streams.copy(global);
            let verdict = verify_with(tap, copy, &trial, reference, cfg, &receiver, &mut rng)?;
            tap.retire_copy(copy)?;
            outcome.trials_tested += 1;
            outcome.copies_consumed += 1;
            global += 1;
            if verdict.accept {
                outcome.recovered = Some(trial);
                break 'windows;
            }
        }
    }
    let grants_after: u64 = windows.iter().map(EveTap::grants).sum();
    outcome.symbols_consumed = grants_after - grants_before;
    Ok(outcome)
}

/// Tries keys in order, one per copy, and returns the first accepted key.
pub fn exhaustive_search(
    tap: &mut EveTap,
    reference: Option<&Plaintext>,
    cfg: &AttackConfig,
    streams: &RunStreams,
) -> Result<AttackOutcome> {
    search_windows(std::slice::from_mut(tap), &[reference], cfg, streams)
}

/// Exhaustive search over the copies of r transmissions encrypted under the
/// same seed; every copy gets a distinct trial key.
pub fn multi_window_attack(
    windows: &mut [EveTap],
    references: &[Plaintext],
    cfg: &AttackConfig,
    streams: &RunStreams,
) -> Result<AttackOutcome> {
    let refs: Vec<Option<&Plaintext>> = match cfg.scorer {
        Scorer::KnownPlaintext => {
            if references.len() != windows.len() {
                return Err(Error::LengthMismatch {
                    left: references.len(),
                    right: windows.len(),
                });
            }
            references.iter().map(Some).collect()
        }
        Scorer::English => vec![None; windows.len()],
    };
    search_windows(windows, &refs, cfg, streams)
}
