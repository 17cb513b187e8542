//! Simulator and attack harness for a mesoscopic coherent-state stream cipher.
//!
//! Alice and Bob share a short seed key, expand it into an M-ary running key
//! and use each running-key symbol to choose one of M/2 antipodal phase-shift
//! bases for a plaintext bit. The crate models:
//!
//! * the keystream generator ([`keystream`]),
//! * coherent-state geometry and keyed phase discrimination ([`optics`]),
//! * Alice's encoder, Bob's decoder and the key-generation/one-time-pad
//!   variant ([`cipher`]),
//! * a lossy channel that an eavesdropper replaces with a lossless one and
//!   splits into copies ([`channel`]),
//! * the attack engines that exploit those copies ([`attacks`]),
//! * and a reproducible Monte-Carlo experiment runner ([`harness`]).

pub mod attacks;
pub mod bits;
pub mod channel;
pub mod cipher;
pub mod error;
pub mod harness;
pub mod keystream;
pub mod optics;
pub mod stream;

pub use error::{Error, Result};
