//! Deterministic randomness.
//!
//! Every stochastic operation in the crate takes an explicit handle to
//! the one named generator, [`TrialRng`] (ChaCha8). A run is identified
//! by a master seed; independent trials get independent streams of the
//! same seed via [`for_trial`], so trial results do not depend on
//! execution order or thread count.

use rand_core::RngCore;

pub use rand_chacha::ChaCha8Rng as TrialRng;
use rand_core::SeedableRng;

/// Generator for the run as a whole.
pub fn master(seed: u64) -> TrialRng {
    TrialRng::seed_from_u64(seed)
}

/// Generator for one trial: same seed, per-trial stream.
pub fn for_trial(seed: u64, trial: u64) -> TrialRng {
    let mut rng = TrialRng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform f64 in [0, 1) with 53 random mantissa bits.
#[inline]
pub fn uniform_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Bernoulli(p) draw. `p` outside `[0,1]` saturates.
#[inline]
pub fn bernoulli<R: RngCore + ?Sized>(rng: &mut R, p: f64) -> bool {
    uniform_f64(rng) < p
}

/// Uniform index in [0, bound) by masked rejection; unbiased.
pub fn uniform_index<R: RngCore + ?Sized>(rng: &mut R, bound: usize) -> usize {
    assert!(bound > 0, "uniform_index: empty range");
    if bound == 1 {
        return 0;
    }
    let mask = (bound as u64).next_power_of_two() - 1;
    loop {
        let v = rng.next_u64() & mask;
        if (v as usize) < bound {
            return v as usize;
        }
    }
}
