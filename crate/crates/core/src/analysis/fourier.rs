//! Walsh-Hadamard transform and the noise operator.
//!
//! Functions on `{0,1}^m` are stored as slices of length `2^m`. The
//! spectrum uses the expectation convention: `coeff(s) = E_x[f(x)
//! chi_s(x)]` with `chi_s(x) = (-1)^{|x & s|}`, so Parseval reads
//! `sum_s coeff(s)^2 = E[f^2]`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

use super::dist::DenseDistribution;

/// In-place unnormalized transform; applying it twice multiplies by
/// `2^m`. On a probability vector it produces the character sums
/// `F(s) = sum_x p(x) chi_s(x)`.
pub fn butterfly(v: &mut [f64]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two() || n == 1);
    let mut h = 1;
    while h < n {
        let step = h * 2;
        let mut base = 0;
        while base < n {
            for j in base..base + h {
                let a = v[j];
                let b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
            base += step;
        }
        h = step;
    }
}

/// Fourier coefficients of a function, indexed by subset masks.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSpectrum {
    m: u32,
    coeffs: Vec<f64>,
}

impl FourierSpectrum {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, s: u32) -> f64 {
        self.coeffs[s as usize]
    }

    /// `sum_s coeff(s)^2`; equals `E[f^2]` by Parseval.
    pub fn parseval_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Total squared weight at levels `<= t`.
    pub fn low_degree_weight(&self, t: u32) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(s, _)| (*s as u32).count_ones() <= t)
            .map(|(_, c)| c * c)
            .sum()
    }

    /// Reconstruct the function: `f(x) = sum_s coeff(s) chi_s(x)`.
    pub fn synthesize(&self) -> Vec<f64> {
        let mut v = self.coeffs.clone();
        butterfly(&mut v);
        v
    }
}

/// Forward transform of a function table (`m <= 24`).
pub fn spectrum(f: &[f64], m: u32) -> Result<FourierSpectrum> {
    if m > super::dist::MAX_BITS {
        return Err(Error::SizeCap {
            m,
            cap: super::dist::MAX_BITS,
        });
    }
    if f.len() != 1usize << m {
        return Err(Error::BadDistribution(format!(
            "expected {} values for m={m}, got {}",
            1usize << m,
            f.len()
        )));
    }
    let scale = 1.0 / (1usize << m) as f64;
    let mut coeffs = f.to_vec();
    butterfly(&mut coeffs);
    for c in coeffs.iter_mut() {
        *c *= scale;
    }
    Ok(FourierSpectrum { m, coeffs })
}

/// Expectation-norm `(E|f|^p)^(1/p)`.
pub fn p_norm(f: &[f64], p: f64) -> f64 {
    debug_assert!(p >= 1.0);
    let mean = f.iter().map(|&v| math::pow(math::abs(v), p)).sum::<f64>() / f.len() as f64;
    math::pow(mean, 1.0 / p)
}

/// `max |f|`.
pub fn sup_norm(f: &[f64]) -> f64 {
    f.iter().map(|&v| math::abs(v)).fold(0.0, f64::max)
}

/// `E|f|`.
pub fn one_norm(f: &[f64]) -> f64 {
    f.iter().map(|&v| math::abs(v)).sum::<f64>() / f.len() as f64
}

/// Damping factor the noise operator applies at level `k`.
#[inline]
pub fn noise_multiplier(delta: f64, k: u32) -> f64 {
    math::powi(1.0 - 2.0 * delta, k)
}

/// Distribution of `X ^ Z` where each bit of `Z` is 1 with probability
/// `delta`, computed by damping the character sums: level `|s|` is
/// multiplied by `(1-2*delta)^|s|`.
pub fn apply_noise(d: &DenseDistribution, delta: f64) -> Result<DenseDistribution> {
    if !(0.0..=0.5).contains(&delta) {
        return Err(Error::NoiseRateOutOfRange { value: delta });
    }
    let m = d.m();
    let mut v = d.probs().to_vec();
    butterfly(&mut v);
    for (s, value) in v.iter_mut().enumerate() {
        *value *= noise_multiplier(delta, (s as u32).count_ones());
    }
    butterfly(&mut v);
    let scale = 1.0 / (1usize << m) as f64;
    for value in v.iter_mut() {
        *value *= scale;
    }
    DenseDistribution::new(m, v)
}

/// Direct convolution route for the same operator: O(4^m), used as the
/// independent check of the multiplier form.
pub fn apply_noise_convolution(d: &DenseDistribution, delta: f64) -> Result<DenseDistribution> {
    if !(0.0..=0.5).contains(&delta) {
        return Err(Error::NoiseRateOutOfRange { value: delta });
    }
    let m = d.m();
    let size = 1usize << m;
    // kernel[w] = delta^w (1-delta)^(m-w)
    let kernel: Vec<f64> = (0..=m)
        .map(|w| math::powi(delta, w) * math::powi(1.0 - delta, m - w))
        .collect();
    let mut out = alloc::vec![0.0; size];
    for (x, &px) in d.probs().iter().enumerate() {
        if px == 0.0 {
            continue;
        }
        for (y, slot) in out.iter_mut().enumerate() {
            *slot += px * kernel[(x ^ y).count_ones() as usize];
        }
    }
    DenseDistribution::new(m, out)
}
