use super::search::{agreement, decode_span, receiver_for, trial_keys};
use super::{is_printable_english, AttackConfig, AttackOutcome, Scorer};
use crate::bits::bits_to_bytes;
use crate::channel::EveTap;
use crate::cipher::Plaintext;
use crate::error::{Error, Result};
use crate::keystream::SeedKey;
use crate::stream::RunStreams;

/// Sequential search that abandons a trial key as soon as a short stage of
/// decoded symbols looks wrong.
///
/// Eve walks through a copy b symbols at a time. Each stage is decoded under
/// the current trial key and checked: with a known plaintext the stage must
/// agree on at least a fraction tau of its bits; with the English model the
/// stage's bytes must be at least a fraction tau printable, and once v
/// symbols have passed the whole decoded text must reach the model's pass
/// score. A failed stage moves on to the next trial key at the next unused
/// symbols of the same copy. A fresh copy is opened when fewer than b
/// symbols remain.
pub fn pruning_search(
    tap: &mut EveTap,
    reference: Option<&Plaintext>,
    cfg: &AttackConfig,
    streams: &RunStreams,
) -> Result<AttackOutcome> {
    cfg.validate()?;
    let n = tap.len();
    let b = cfg.prefix_bits;
    if let (Scorer::KnownPlaintext, None) = (cfg.scorer, reference) {
        return Err(Error::Config(
            "the known-plaintext scorer needs a reference plaintext".into(),
        ));
    }
    if let (Scorer::KnownPlaintext, Some(r)) = (cfg.scorer, reference) {
        if r.len() < n {
            return Err(Error::LengthMismatch {
                left: r.len(),
                right: n,
            });
        }
    }

    let stages_per_copy = (n / b) as u64;
    let budget = tap.copies() as u64 * stages_per_copy;
    let keys = trial_keys(cfg, budget, &mut streams.order());
    let receiver = receiver_for(tap);
    let grants_before = tap.grants();

    let mut outcome = AttackOutcome::default();
    if stages_per_copy == 0 || keys.is_empty() {
        return Ok(outcome);
    }

    let mut copy = 0usize;
    let mut pos = 0usize;
    let mut rng = streams.copy(0);
    outcome.copies_consumed = 1;

    let mut next_key = 0usize;
    let mut trial = SeedKey::new(keys[0], cfg.key_bits)?;
    outcome.trials_tested = 1;
    let mut passed_bits = 0usize;
    let mut text: Vec<bool> = Vec::new();

    loop {
        if pos + b > n {
            copy += 1;
            if copy >= tap.copies() {
                break;
            }
            pos = 0;
            rng = streams.copy(copy as u64);
            outcome.copies_consumed += 1;
        }

        let decoded = decode_span(tap, copy, pos, b, &trial, &receiver, &mut rng)?;
        let stage_ok = match (cfg.scorer, reference) {
            (Scorer::KnownPlaintext, Some(r)) => {
                agreement(&decoded, &r.bits()[pos..pos + b]) >= cfg.accept_threshold
            }
            _ => {
                let bytes = bits_to_bytes(&decoded);
                let printable = bytes.iter().filter(|&&c| is_printable_english(c)).count();
                printable as f64 / bytes.len() as f64 >= cfg.accept_threshold
            }
        };
        pos += b;

        let mut accepted = false;
        let mut rejected = !stage_ok;
        if stage_ok {
            passed_bits += b;
            if cfg.scorer == Scorer::English {
                text.extend_from_slice(&decoded);
            }
            if passed_bits >= cfg.verify_bits {
                accepted = match cfg.scorer {
                    Scorer::KnownPlaintext => true,
                    Scorer::English => cfg.english.passes(&bits_to_bytes(&text))?,
                };
                rejected = !accepted;
            }
        }

        if accepted {
            outcome.recovered = Some(trial);
            break;
        }
        if rejected {
            next_key += 1;
            let Some(&key) = keys.get(next_key) else {
                break;
            };
            trial = SeedKey::new(key, cfg.key_bits)?;
            outcome.trials_tested += 1;
            passed_bits = 0;
            text.clear();
        }
    }

    outcome.symbols_consumed = tap.grants() - grants_before;
    Ok(outcome)
}
