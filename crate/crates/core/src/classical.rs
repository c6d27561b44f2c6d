//! The shared-randomness classical sampling protocol.
//!
//! Shared randomness picks two uniform k-subsets `S1, S2` of positions;
//! Alice's one-way message is `x1` on `S1` and `x2` on `S2` (2k bits).
//! For each shift `i` Bob collects the collision set `C_i = {p in S2 :
//! shift_{-i}(p) in S1}`, where both sampled coordinates of the shifted
//! XOR are visible, estimates the relative weight at `i` from those
//! positions, and answers 1 when some shift's estimate drops to the
//! decision threshold. By the birthday effect `E|C_i| = k^2/n`, so
//! `k ~ sqrt(n log n)` leaves ~log n estimable positions per shift.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::bits::ShiftIndex;
use crate::error::{Error, Result};
use crate::math;
use crate::problem::ShapInstance;
use crate::rng;

#[derive(Clone, Debug)]
pub struct SamplingConfig {
    pub n: usize,
    /// Positions sampled per string.
    pub k: usize,
    /// Decision threshold on the estimated relative weight; answer 1
    /// iff some shift estimate is <= theta. Default 13/30, the midpoint
    /// of the promise constants 2/5 and 7/15.
    pub theta: f64,
}

impl SamplingConfig {
    pub fn new(n: usize, k: usize, theta: f64) -> Result<SamplingConfig> {
        if n == 0 {
            return Err(Error::Config(String::from("need n >= 1")));
        }
        if k == 0 || k > n {
            return Err(Error::Config(format!("k={k} outside 1..={n}")));
        }
        if !(theta > 2.0 / 5.0 && theta < 7.0 / 15.0) {
            return Err(Error::Config(format!(
                "theta {theta} outside (2/5, 7/15)"
            )));
        }
        Ok(SamplingConfig { n, k, theta })
    }

    /// Budget-style sizing `k = ceil(c * sqrt(n ln n))`, clamped to n
    /// (full sampling) when the formula exceeds the string length.
    pub fn with_multiplier(n: usize, c: f64, theta: f64) -> Result<SamplingConfig> {
        if n < 2 {
            return Err(Error::Config(String::from("need n >= 2")));
        }
        if !(c > 0.0) {
            return Err(Error::Config(format!("multiplier c={c} must be positive")));
        }
        let k = math::ceil(c * math::sqrt(n as f64 * math::ln(n as f64))) as usize;
        SamplingConfig::new(n, k.min(n), theta)
    }

    /// One-way communication cost in bits: Alice sends 2k sampled bits.
    pub fn cost_bits(&self) -> u64 {
        2 * self.k as u64
    }
}

/// Expected collision-set size per shift: `k^2 / n` for independent
/// uniform k-subsets.
pub fn expected_collisions(n: usize, k: usize) -> f64 {
    (k * k) as f64 / n as f64
}

/// Outcome of one protocol execution.
#[derive(Clone, Debug)]
pub struct SamplingRun {
    /// 1 iff some shift estimate is at most theta.
    pub answer: u8,
    /// The smallest estimated relative weight over shifts.
    pub min_estimate: f64,
    /// Shift attaining the minimum.
    pub argmin_shift: ShiftIndex,
    /// Collision-set sizes per shift.
    pub collisions: Vec<usize>,
    /// Estimated relative weight per shift (1/2 where no collision).
    pub estimates: Vec<f64>,
}

/// Uniform k-subset of 1..=n by partial Fisher-Yates; returns a sorted
/// membership table.
fn sample_subset<R: RngCore + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<bool> {
    let mut positions: Vec<usize> = (1..=n).collect();
    let mut member = vec![false; n + 1];
    for j in 0..k {
        let pick = j + rng::uniform_index(rng, n - j);
        positions.swap(j, pick);
        member[positions[j]] = true;
    }
    member
}

/// Runs the sampling protocol once. The generator drives only the
/// shared-randomness subset choice; everything after the message is
/// deterministic.
pub fn run_sampling_protocol<R: RngCore + ?Sized>(
    inst: &ShapInstance,
    cfg: &SamplingConfig,
    rng: &mut R,
) -> Result<SamplingRun> {
    let n = cfg.n;
    if inst.n() != n {
        return Err(Error::LengthMismatch {
            left: inst.n(),
            right: n,
        });
    }
    let in_s1 = sample_subset(n, cfg.k, rng);
    let in_s2 = sample_subset(n, cfg.k, rng);

    let mut min_estimate = f64::INFINITY;
    let mut argmin_shift = ShiftIndex(0);
    let mut collisions = Vec::with_capacity(n);
    let mut estimates = Vec::with_capacity(n);
    for i in 0..n {
        let shift = ShiftIndex(i);
        let inverse = shift.inverse(n);
        let mut seen = 0usize;
        let mut disagreements = 0usize;
        for p in 1..=n {
            if !in_s2[p] {
                continue;
            }
            let q = inverse.position_image(p, n);
            if !in_s1[q] {
                continue;
            }
            seen += 1;
            let bit = inst.x1().bit(q)?
                ^ inst.x2().bit(p)?
                ^ inst.y1().bit(q)?
                ^ inst.y2().bit(p)?;
            if bit {
                disagreements += 1;
            }
        }
        collisions.push(seen);
        // no evidence reads as mid-band
        let estimate = if seen == 0 {
            0.5
        } else {
            disagreements as f64 / seen as f64
        };
        estimates.push(estimate);
        if estimate < min_estimate {
            min_estimate = estimate;
            argmin_shift = shift;
        }
    }
    Ok(SamplingRun {
        answer: (min_estimate <= cfg.theta) as u8,
        min_estimate,
        argmin_shift,
        collisions,
        estimates,
    })
}
