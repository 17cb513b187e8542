use std::collections::HashSet;

use mesocipher::attacks::{
    exhaustive_search, grover_estimate, grover_success_prob, grover_success_prob_recurrence,
    multi_window_attack, optimal_iterations, pruning_search, trial_keys, AttackConfig, TrialOrder,
};
use mesocipher::channel::{eve_intercept, EveTap};
use mesocipher::cipher::{encode, Plaintext};
use mesocipher::keystream::{Alphabet, SeedKey};
use mesocipher::optics::Constellation;
use mesocipher::stream::RunStreams;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const AMPLITUDE: f64 = 3.0;

fn constellation(t: u64) -> Constellation {
    Constellation::new(
        Alphabet::new(32).unwrap(),
        AMPLITUDE * ((t + 1) as f64).sqrt(),
    )
    .unwrap()
}

fn windows(
    seed: &SeedKey,
    r: usize,
    t: u64,
    n: usize,
    rng_seed: u64,
) -> (Vec<EveTap>, Vec<Plaintext>) {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let c = constellation(t);
    (0..r)
        .map(|_| {
            let x = Plaintext::random(n, &mut rng).unwrap();
            (eve_intercept(&encode(seed, &x, &c), t).unwrap(), x)
        })
        .unzip()
}

#[test]
fn exhaustive_search_succeeds_exactly_when_the_key_is_covered() {
    let cfg = AttackConfig::new(8);
    for key in [0u64, 5, 63, 64, 200, 255] {
        let seed = SeedKey::new(key, 8).unwrap();
        for t in [32u64, 64, 256] {
            let (mut taps, xs) = windows(&seed, 1, t, 256, key ^ t);
            let out = exhaustive_search(&mut taps[0], Some(&xs[0]), &cfg, &RunStreams::new(9, key))
                .unwrap();
            assert_eq!(out.is_success(&seed), key < t, "key {key} t {t}");
            let expected_trials = if key < t { key + 1 } else { t };
            assert_eq!(out.trials_tested, expected_trials);
            assert_eq!(out.copies_consumed, expected_trials);
            assert_eq!(out.symbols_consumed, expected_trials * 256);
        }
    }
}

#[test]
fn single_window_campaign_is_the_exhaustive_search() {
    let cfg = AttackConfig {
        order: TrialOrder::Random,
        ..AttackConfig::new(8)
    };
    let seed = SeedKey::new(77, 8).unwrap();
    let streams = RunStreams::new(4, 2);
    let (mut a, xa) = windows(&seed, 1, 100, 200, 1);
    let (mut b, _) = windows(&seed, 1, 100, 200, 1);
    let one = exhaustive_search(&mut a[0], Some(&xa[0]), &cfg, &streams).unwrap();
    let many = multi_window_attack(&mut b, &xa, &cfg, &streams).unwrap();
    assert_eq!(one, many);
}

#[test]
fn windows_pool_their_copies() {
    let cfg = AttackConfig::new(8);
    let seed = SeedKey::new(150, 8).unwrap();
    for (r, t, covered) in [
        (2usize, 64u64, false),
        (3, 64, true),
        (4, 40, true),
        (8, 16, false),
    ] {
        let (mut taps, xs) = windows(&seed, r, t, 160, r as u64);
        let out = multi_window_attack(&mut taps, &xs, &cfg, &RunStreams::new(1, 0)).unwrap();
        assert_eq!(out.is_success(&seed), covered, "r {r} t {t}");
        assert_eq!(
            out.copies_consumed,
            if covered { 151 } else { r as u64 * t }
        );
    }
}

#[test]
fn pruning_spends_a_fraction_of_the_symbols() {
    let cfg = AttackConfig::new(10);
    let seed = SeedKey::new(900, 10).unwrap();
    let (mut ex, xs) = windows(&seed, 1, 1024, 1024, 3);
    let (mut pr, _) = windows(&seed, 1, 1024, 1024, 3);
    let streams = RunStreams::new(0, 0);
    let full = exhaustive_search(&mut ex[0], Some(&xs[0]), &cfg, &streams).unwrap();
    let pruned = pruning_search(&mut pr[0], Some(&xs[0]), &cfg, &streams).unwrap();
    assert!(full.is_success(&seed) && pruned.is_success(&seed));
    assert_eq!(pruned.trials_tested, 901);
    assert!(pruned.symbols_consumed * 20 < full.symbols_consumed);
    // a wrong key survives a 16-symbol stage with probability near P(Bin(16, 1/2) >= 12)
    let mean_per_wrong_key = (pruned.symbols_consumed - 128) as f64 / 900.0;
    assert!(
        mean_per_wrong_key > 16.0 && mean_per_wrong_key < 18.5,
        "{mean_per_wrong_key}"
    );
}

#[test]
fn measurements_are_never_repeated() {
    let cfg = AttackConfig::new(6);
    let seed = SeedKey::new(63, 6).unwrap();
    let (mut taps, xs) = windows(&seed, 1, 8, 256, 0);
    let out = pruning_search(&mut taps[0], Some(&xs[0]), &cfg, &RunStreams::new(0, 0)).unwrap();
    assert_eq!(out.symbols_consumed, taps[0].grants());
    assert_eq!(taps[0].consumed_count() as u64, taps[0].grants());
}

#[test]
fn grover_closed_form_matches_recurrence() {
    for n in [2u128, 4, 8, 16, 1 << 10, 1 << 16] {
        let j_star = optimal_iterations(n);
        for j in (0..=j_star + 3).chain([2 * j_star]) {
            let closed = grover_success_prob(n, j);
            let rec = grover_success_prob_recurrence(n, j);
            assert!(
                (closed - rec).abs() < 1e-12,
                "N {n} j {j}: {closed} vs {rec}"
            );
        }
    }
    assert!(grover_estimate(20, 0.5).unwrap().success_prob > 0.999);
}

proptest! {
    #[test]
    fn trial_keys_are_distinct_and_in_range(bits in 1u32..=20, count in 0u64..5000, seed in any::<u64>()) {
        let cfg = AttackConfig { order: TrialOrder::Random, ..AttackConfig::new(bits) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let keys = trial_keys(&cfg, count, &mut rng);
        prop_assert_eq!(keys.len() as u64, count.min(1 << bits));
        prop_assert!(keys.iter().all(|&k| k < 1 << bits));
        prop_assert_eq!(keys.iter().collect::<HashSet<_>>().len(), keys.len());
    }
}
