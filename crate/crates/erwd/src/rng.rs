//! Reproducible per-replica random number streams.
//!
//! Every replica draws from a counter-based stream addressed by
//! `(master seed, replica index)`, so an ensemble is a pure function of its
//! seed and is independent of execution order and thread count.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream id bit reserved for the auxiliary stream.
const AUX_BIT: u64 = 1 << 63;

/// Address of one replica's randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    master: u64,
    replica: u64,
}

impl RngStream {
    /// `replica` must stay below 2^63; the top stream bit addresses the
    /// auxiliary stream.
    pub fn new(master: u64, replica: u64) -> Self {
        assert!(replica < AUX_BIT, "replica index out of range");
        Self { master, replica }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    pub fn replica(&self) -> u64 {
        self.replica
    }

    /// Stream that drives the walk itself.
    pub fn walk_rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.replica);
        rng
    }

    /// Stream for draws made outside the walk (the step-size multiplier).
    /// Keeping it separate leaves the walk draws identical across runs that
    /// differ only in the multiplier law.
    pub fn aux_rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.replica | AUX_BIT);
        rng
    }
}

/// Two uniforms in `[0,1)` from one 64-bit draw (32 bits each). The walk
/// kernel consumes exactly one pair per step regardless of regime, policy,
/// or branch taken, so runs with a common `(seed, replica)` see identical
/// uniforms step for step (common random numbers across variants).
#[inline]
pub fn uniform_pair(rng: &mut impl RngCore) -> (f64, f64) {
    let bits = rng.next_u64();
    const SCALE: f64 = 1.0 / 4294967296.0; // 2^-32
    let hi = (bits >> 32) as f64 * SCALE;
    let lo = (bits & 0xffff_ffff) as f64 * SCALE;
    (hi, lo)
}

/// One uniform in `[0,1)` with full 53-bit resolution.
#[inline]
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    const SCALE: f64 = 1.0 / 9007199254740992.0; // 2^-53
    (rng.next_u64() >> 11) as f64 * SCALE
}
