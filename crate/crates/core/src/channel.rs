//! Lossy channel, the eavesdropper's lossless substitute and beamsplitter, and
//! bookkeeping for destructive measurements on the intercepted copies.

use bitvec::prelude::*;
use rand::Rng;

use crate::cipher::SignalSequence;
use crate::error::{Error, Result};
use crate::optics::PhaseDiscriminator;

/// Amplitude transmission is sqrt(eta); eta = 1/(t+1) leaves room for t
/// equal copies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelModel {
    transmission: f64,
}

impl ChannelModel {
    pub fn new(transmission: f64) -> Result<Self> {
        if !(transmission > 0.0 && transmission <= 1.0) {
            return Err(Error::InvalidTransmission(transmission));
        }
        Ok(ChannelModel { transmission })
    }

    pub fn from_copies(t: u64) -> Self {
        ChannelModel {
            transmission: 1.0 / (t as f64 + 1.0),
        }
    }

    pub fn transmission(&self) -> f64 {
        self.transmission
    }

    /// Whole copies available to Eve: floor(1/eta) - 1, remainder discarded.
    pub fn eve_copies(&self) -> u64 {
        let inverse = 1.0 / self.transmission;
        // 1/(1/(t+1)) can land a hair below t+1
        let rounded = inverse.round();
        let whole = if (inverse - rounded).abs() < 1e-9 * rounded {
            rounded
        } else {
            inverse.floor()
        };
        (whole as u64).saturating_sub(1)
    }
}

/// Honest channel: amplitudes scale by sqrt(eta), phases untouched.
pub fn transmit(signal: &SignalSequence, channel: &ChannelModel) -> SignalSequence {
    signal.scaled(channel.transmission().sqrt())
}

/// Bob's copy plus t identical copies held by Eve, each of amplitude
/// alpha0 / sqrt(t+1), with a consumed flag per (copy, symbol).
#[derive(Clone, Debug)]
pub struct EveTap {
    bob_copy: SignalSequence,
    eve_signal: SignalSequence,
    copies: usize,
    consumed: BitVec,
    grants: u64,
}

pub fn eve_intercept(signal: &SignalSequence, t: u64) -> Result<EveTap> {
    if t < 1 {
        return Err(Error::NoCopies(t));
    }
    split_lossless(signal, &ChannelModel::from_copies(t))
}

/// Replaces a channel of transmission eta by a lossless one and splits the
/// light into Bob's copy plus floor(1/eta) - 1 copies for Eve, each of
/// amplitude sqrt(eta) alpha0. Any remainder is discarded.
pub fn split_lossless(signal: &SignalSequence, channel: &ChannelModel) -> Result<EveTap> {
    let t = channel.eve_copies();
    if t < 1 {
        return Err(Error::NoCopies(t));
    }
    let copies = usize::try_from(t).map_err(|_| Error::NoCopies(t))?;
    let split = transmit(signal, channel);
    Ok(EveTap {
        bob_copy: split.clone(),
        eve_signal: split,
        copies,
        consumed: bitvec![0; copies * signal.len()],
        grants: 0,
    })
}

impl EveTap {
    pub fn copies(&self) -> usize {
        self.copies
    }

    /// Symbols per copy.
    pub fn len(&self) -> usize {
        self.eve_signal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eve_signal.is_empty()
    }

    pub fn bob_copy(&self) -> &SignalSequence {
        &self.bob_copy
    }

    /// All of Eve's copies share phases and amplitude.
    pub fn copy(&self, copy: usize) -> Result<&SignalSequence> {
        if copy >= self.copies {
            return Err(Error::TapIndex { copy, symbol: 0 });
        }
        Ok(&self.eve_signal)
    }

    /// Sum of squared amplitudes over Bob's and Eve's copies.
    pub fn total_energy(&self) -> f64 {
        let a = self.eve_signal.amplitude();
        (self.copies as f64 + 1.0) * a * a
    }

    fn slot(&self, copy: usize, symbol: usize) -> Result<usize> {
        if copy >= self.copies || symbol >= self.len() {
            return Err(Error::TapIndex { copy, symbol });
        }
        Ok(copy * self.len() + symbol)
    }

    pub fn is_consumed(&self, copy: usize, symbol: usize) -> Result<bool> {
        Ok(self.consumed[self.slot(copy, symbol)?])
    }

    /// Grants permission to measure (copy, symbol) exactly once.
    pub fn consume_symbol(&mut self, copy: usize, symbol: usize) -> Result<()> {
        let slot = self.slot(copy, symbol)?;
        if self.consumed[slot] {
            return Err(Error::AlreadyConsumed { copy, symbol });
        }
        self.consumed.set(slot, true);
        self.grants += 1;
        Ok(())
    }

    /// Consumes and measures one symbol in the basis `trial_phase`.
    pub fn measure<R: Rng + ?Sized>(
        &mut self,
        copy: usize,
        symbol: usize,
        trial_phase: u32,
        receiver: &PhaseDiscriminator,
        rng: &mut R,
    ) -> Result<bool> {
        self.consume_symbol(copy, symbol)?;
        let phase = self.eve_signal.symbols()[symbol].phase_index;
        Ok(receiver.measure(phase, trial_phase, rng))
    }

    /// Marks every remaining symbol of a copy as spent and returns how many
    /// were still unmeasured.
    pub fn retire_copy(&mut self, copy: usize) -> Result<u64> {
        let start = self.slot(copy, 0)?;
        let len = self.len();
        let range = &mut self.consumed[start..start + len];
        let fresh = range.count_zeros() as u64;
        range.fill(true);
        self.grants += fresh;
        Ok(fresh)
    }

    pub fn unconsumed_in_copy(&self, copy: usize) -> Result<usize> {
        let start = self.slot(copy, 0)?;
        Ok(self.consumed[start..start + self.len()].count_zeros())
    }

    /// Total (copy, symbol) grants issued so far.
    pub fn grants(&self) -> u64 {
        self.grants
    }

    pub fn consumed_count(&self) -> usize {
        self.consumed.count_ones()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::{encode, Plaintext};
    use crate::keystream::{Alphabet, SeedKey};
    use crate::optics::Constellation;

    fn signal(alpha0: f64, n: usize) -> SignalSequence {
        let c = Constellation::new(Alphabet::new(32).unwrap(), alpha0).unwrap();
        let seed = SeedKey::new(0x123, 12).unwrap();
        encode(&seed, &Plaintext::new(vec![true; n]).unwrap(), &c)
    }

    #[test]
    fn transmission_validation() {
        for bad in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(ChannelModel::new(bad).is_err());
        }
        assert!(ChannelModel::new(1.0).is_ok());
    }

    #[test]
    fn copies_from_transmission() {
        for t in 1..=5000u64 {
            assert_eq!(ChannelModel::from_copies(t).eve_copies(), t);
        }
        assert_eq!(ChannelModel::new(0.3).unwrap().eve_copies(), 2);
        assert_eq!(ChannelModel::new(0.51).unwrap().eve_copies(), 0);
        assert_eq!(ChannelModel::new(1.0).unwrap().eve_copies(), 0);
    }

    #[test]
    fn transmit_scales_amplitude_only() {
        let s = signal(2.0, 16);
        assert_eq!(transmit(&s, &ChannelModel::new(1.0).unwrap()), s);
        let out = transmit(&s, &ChannelModel::new(0.25).unwrap());
        assert_eq!(out.amplitude(), 1.0);
        for (a, b) in s.symbols().iter().zip(out.symbols()) {
            assert_eq!(a.phase_index, b.phase_index);
        }
    }

    #[test]
    fn intercept_splits_evenly() {
        let s = signal(2.0, 8);
        let tap = eve_intercept(&s, 3).unwrap();
        assert_eq!(tap.copies(), 3);
        assert_eq!(tap.bob_copy().amplitude(), 1.0);
        assert_eq!(tap.copy(2).unwrap().amplitude(), 1.0);
        assert!(tap.copy(3).is_err());
        assert!(matches!(eve_intercept(&s, 0), Err(Error::NoCopies(0))));

        let one = eve_intercept(&s, 1).unwrap();
        assert_eq!(one.bob_copy().amplitude(), one.copy(0).unwrap().amplitude());
    }

    #[test]
    fn substitution_is_invisible_to_bob() {
        let s = signal(5.0, 4);
        for t in 1..=64u64 {
            let tap = eve_intercept(&s, t).unwrap();
            assert!((tap.total_energy() - 25.0).abs() < 1e-12);
            let honest = transmit(&s, &ChannelModel::from_copies(t));
            assert!((honest.amplitude() - tap.bob_copy().amplitude()).abs() <= 1e-15);
        }
    }

    #[test]
    fn fractional_split_discards_remainder() {
        let s = signal(2.0, 4);
        let tap = split_lossless(&s, &ChannelModel::new(0.3).unwrap()).unwrap();
        assert_eq!(tap.copies(), 2);
        assert!((tap.copy(0).unwrap().amplitude() - 0.3f64.sqrt() * 2.0).abs() < 1e-15);
        assert!(tap.total_energy() < 4.0);
        assert!(split_lossless(&s, &ChannelModel::new(0.6).unwrap()).is_err());
    }

    #[test]
    fn consumption_is_once_only() {
        let s = signal(1.0, 5);
        let mut tap = eve_intercept(&s, 2).unwrap();
        tap.consume_symbol(0, 0).unwrap();
        assert!(matches!(
            tap.consume_symbol(0, 0),
            Err(Error::AlreadyConsumed { copy: 0, symbol: 0 })
        ));
        assert!(tap.consume_symbol(1, 0).is_ok());
        assert!(matches!(
            tap.consume_symbol(2, 0),
            Err(Error::TapIndex { .. })
        ));
        assert!(matches!(
            tap.consume_symbol(0, 5),
            Err(Error::TapIndex { .. })
        ));
        assert_eq!(tap.grants(), 2);
    }

    #[test]
    fn full_copy_takes_n_grants() {
        let s = signal(1.0, 37);
        let mut tap = eve_intercept(&s, 2).unwrap();
        let mut granted = 0;
        for i in 0..37 {
            tap.consume_symbol(1, i).unwrap();
            granted += 1;
        }
        assert_eq!(granted, 37);
        assert_eq!(tap.unconsumed_in_copy(1).unwrap(), 0);
        assert_eq!(tap.retire_copy(1).unwrap(), 0);

        tap.consume_symbol(0, 3).unwrap();
        assert_eq!(tap.retire_copy(0).unwrap(), 36);
        assert_eq!(tap.grants(), 74);
        assert_eq!(tap.consumed_count() as u64, tap.grants());
    }
}
