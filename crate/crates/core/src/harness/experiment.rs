use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::config::{AttackKind, ExperimentConfig};
use crate::attacks::{
    exhaustive_search, multi_window_attack, pruning_search, AttackOutcome, Scorer,
};
use crate::channel::{split_lossless, transmit, EveTap};
use crate::cipher::{
    bob_decode, encode, otp_generate_and_wrap, variant_reduce_known_plaintext, Plaintext,
};
use crate::error::{Error, Result};
use crate::keystream::{stream_xor, SeedKey};
use crate::stream::RunStreams;

const CORPUS: &str = include_str!("../../data/english_corpus.txt");

/// 97.5th percentile of the standard normal.
const Z_95: f64 = 1.959_963_984_540_054;

/// Outcome of one Monte-Carlo run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub run_id: u64,
    pub seed: SeedKey,
    pub success: bool,
    pub trials_tested: u64,
    pub copies_consumed: u64,
    pub symbols_consumed: u64,
    pub wall_ms: u64,
    /// Bob's bit-error rate on the first window.
    pub bob_ber: f64,
}

/// Aggregate over all runs of one configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub runs: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_trials: f64,
    pub mean_copies: f64,
    pub mean_symbols: f64,
    pub mean_bob_ber: f64,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    /// Sorted by run id.
    pub records: Vec<RunRecord>,
    pub summary: Summary,
}

/// Wilson score interval for `successes` out of `n` at 95 % confidence.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn english_window<R: Rng + ?Sized>(n_bits: usize, rng: &mut R) -> Result<Plaintext> {
    let corpus = CORPUS.as_bytes();
    let start = rng.gen_range(0..corpus.len());
    let bytes: Vec<u8> = corpus
        .iter()
        .cycle()
        .skip(start)
        .take(n_bits / 8)
        .copied()
        .collect();
    Plaintext::from_bytes(&bytes)
}

/// What Eve knows about one window and what the light actually carries.
struct Window {
    /// Plaintext of the quantum layer.
    carried: Plaintext,
    /// Eve's known plaintext for that layer, when the scorer uses one.
    reference: Plaintext,
}

fn draw_window<R: Rng + ?Sized>(
    cfg: &ExperimentConfig,
    inner: Option<&SeedKey>,
    rng: &mut R,
) -> Result<Window> {
    let message = match cfg.scorer {
        Scorer::English => english_window(cfg.n, rng)?,
        Scorer::KnownPlaintext => Plaintext::random(cfg.n, rng)?,
    };
    let (layer, reference) = if cfg.otp_variant {
        let constellation = cfg.constellation()?;
        // the seed is irrelevant here: only the pad and ciphertext are kept
        let dummy = SeedKey::new(0, 1)?;
        let (_, session) =
            otp_generate_and_wrap(&dummy, cfg.n, message.bits(), &constellation, rng)?;
        let recovered = variant_reduce_known_plaintext(&session.ciphertext, message.bits())?;
        debug_assert_eq!(recovered, session.pad);
        (Plaintext::new(session.pad)?, Plaintext::new(recovered)?)
    } else {
        (message.clone(), message)
    };
    let carried = match inner {
        Some(key) => Plaintext::new(stream_xor(key, layer.bits()))?,
        None => layer,
    };
    Ok(Window { carried, reference })
}

/// One full pipeline: keys and plaintexts, encoding, Bob's reception, Eve's
/// interception and attack.
pub fn run_one(cfg: &ExperimentConfig, run_id: u64) -> Result<RunRecord> {
    let started = Instant::now();
    let streams = RunStreams::new(cfg.master_seed, run_id);
    let mut setup = streams.setup();

    let key_mask = if cfg.k == 64 {
        u64::MAX
    } else {
        (1u64 << cfg.k) - 1
    };
    let seed = SeedKey::new(setup.gen::<u64>() & key_mask, cfg.k)?;
    let inner = if cfg.double_encryption {
        Some(SeedKey::new(setup.gen::<u64>(), 64)?)
    } else {
        None
    };
    let windows = (0..cfg.windows())
        .map(|_| draw_window(cfg, inner.as_ref(), &mut setup))
        .collect::<Result<Vec<_>>>()?;

    let constellation = cfg.constellation()?;
    let channel = cfg.channel()?;
    let signals: Vec<_> = windows
        .iter()
        .map(|w| encode(&seed, &w.carried, &constellation))
        .collect();

    let received = transmit(&signals[0], &channel);
    let decoded = bob_decode(&seed, &received, &mut streams.bob());
    let errors = decoded
        .bits()
        .iter()
        .zip(windows[0].carried.bits())
        .filter(|(a, b)| a != b)
        .count();
    let bob_ber = errors as f64 / cfg.n as f64;

    let mut taps: Vec<EveTap> = signals
        .iter()
        .map(|s| split_lossless(s, &channel))
        .collect::<Result<_>>()?;
    let attack_cfg = cfg.attack_config();
    let reference = match cfg.scorer {
        Scorer::KnownPlaintext => Some(&windows[0].reference),
        Scorer::English => None,
    };
    let outcome: AttackOutcome = match cfg.attack {
        AttackKind::Exhaustive => {
            exhaustive_search(&mut taps[0], reference, &attack_cfg, &streams)?
        }
        AttackKind::Prune => pruning_search(&mut taps[0], reference, &attack_cfg, &streams)?,
        AttackKind::MultiWindow => {
            let refs: Vec<Plaintext> = windows.into_iter().map(|w| w.reference).collect();
            multi_window_attack(&mut taps, &refs, &attack_cfg, &streams)?
        }
    };

    Ok(RunRecord {
        run_id,
        seed,
        success: outcome.is_success(&seed),
        trials_tested: outcome.trials_tested,
        copies_consumed: outcome.copies_consumed,
        symbols_consumed: outcome.symbols_consumed,
        wall_ms: if cfg.timing {
            started.elapsed().as_millis() as u64
        } else {
            0
        },
        bob_ber,
    })
}

pub fn summarize(records: &[RunRecord]) -> Summary {
    let runs = records.len() as u64;
    let successes = records.iter().filter(|r| r.success).count() as u64;
    let mean = |f: &dyn Fn(&RunRecord) -> f64| {
        if runs == 0 {
            0.0
        } else {
            records.iter().map(f).sum::<f64>() / runs as f64
        }
    };
    let (ci_low, ci_high) = wilson_interval(successes, runs);
    Summary {
        runs,
        successes,
        success_rate: if runs == 0 {
            0.0
        } else {
            successes as f64 / runs as f64
        },
        ci_low,
        ci_high,
        mean_trials: mean(&|r| r.trials_tested as f64),
        mean_copies: mean(&|r| r.copies_consumed as f64),
        mean_symbols: mean(&|r| r.symbols_consumed as f64),
        mean_bob_ber: mean(&|r| r.bob_ber),
        wall_ms: records.iter().map(|r| r.wall_ms).sum(),
    }
}

/// Runs `config.runs` independent trials in parallel; records come back in
/// run-id order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let records = (0..config.runs)
        .into_par_iter()
        .map(|run_id| run_one(config, run_id))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&records);
    Ok(ExperimentResult {
        config: config.clone(),
        records,
        summary,
    })
}

pub const SWEEP_AXES: &[&str] = &["t", "r", "k", "alpha0", "eta", "b"];

/// One experiment per value of `axis`. Every point is validated before any
/// run starts.
pub fn sweep(
    config: &ExperimentConfig,
    axis: &str,
    values: &[String],
) -> Result<Vec<ExperimentResult>> {
    if !SWEEP_AXES.contains(&axis) {
        return Err(Error::Config(format!(
            "unknown sweep axis {axis:?}; expected one of {}",
            SWEEP_AXES.join(", ")
        )));
    }
    let points = values
        .iter()
        .map(|value| {
            let mut point = config.clone();
            point.set(axis, value)?;
            point.validate()?;
            Ok(point)
        })
        .collect::<Result<Vec<_>>>()?;
    points.iter().map(run_experiment).collect()
}
