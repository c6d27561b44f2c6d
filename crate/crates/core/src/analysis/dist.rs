//! Exact dense distributions on the Boolean cube.
//!
//! Outcomes of an m-bit distribution are indices in `0..2^m`; bit
//! position `j` (1-based) of an outcome is bit `j-1` of its index, the
//! same convention [`crate::bits::BitString::to_mask`] uses. Subsets of
//! positions are `u32` masks under the same convention.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::math;
use crate::rng;

/// Hard cap on the number of bits of an exactly stored distribution.
pub const MAX_BITS: u32 = 24;

const SUM_TOL: f64 = 1e-12;

/// Probability vector over `{0,1}^m`, entries nonnegative, total 1.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseDistribution {
    m: u32,
    p: Vec<f64>,
}

impl DenseDistribution {
    /// Validates length, nonnegativity and normalization. Entries within
    /// `-1e-12` of zero (projection/transform roundoff) are clamped.
    pub fn new(m: u32, mut p: Vec<f64>) -> Result<DenseDistribution> {
        if m > MAX_BITS {
            return Err(Error::SizeCap { m, cap: MAX_BITS });
        }
        if p.len() != 1usize << m {
            return Err(Error::BadDistribution(format!(
                "expected {} entries for m={m}, got {}",
                1usize << m,
                p.len()
            )));
        }
        let mut sum = 0.0;
        for v in p.iter_mut() {
            if *v < 0.0 {
                if *v < -SUM_TOL {
                    return Err(Error::BadDistribution(format!("negative entry {v}")));
                }
                *v = 0.0;
            }
            sum += *v;
        }
        if math::abs(sum - 1.0) > SUM_TOL {
            return Err(Error::BadDistribution(format!("total mass {sum}")));
        }
        Ok(DenseDistribution { m, p })
    }

    pub fn uniform(m: u32) -> Result<DenseDistribution> {
        if m > MAX_BITS {
            return Err(Error::SizeCap { m, cap: MAX_BITS });
        }
        let size = 1usize << m;
        Ok(DenseDistribution {
            m,
            p: vec![1.0 / size as f64; size],
        })
    }

    pub fn point_mass(m: u32, x: usize) -> Result<DenseDistribution> {
        if m > MAX_BITS {
            return Err(Error::SizeCap { m, cap: MAX_BITS });
        }
        let size = 1usize << m;
        if x >= size {
            return Err(Error::BadDistribution(format!("outcome {x} out of range")));
        }
        let mut p = vec![0.0; size];
        p[x] = 1.0;
        Ok(DenseDistribution { m, p })
    }

    /// Normalizes arbitrary nonnegative weights.
    pub fn from_weights(m: u32, w: &[f64]) -> Result<DenseDistribution> {
        if m > MAX_BITS {
            return Err(Error::SizeCap { m, cap: MAX_BITS });
        }
        if w.len() != 1usize << m {
            return Err(Error::BadDistribution(String::from("weight length mismatch")));
        }
        let total: f64 = w.iter().sum();
        if !(total > 0.0) || w.iter().any(|&v| v < 0.0) {
            return Err(Error::BadDistribution(String::from(
                "weights must be nonnegative with positive sum",
            )));
        }
        let p = w.iter().map(|&v| v / total).collect();
        Ok(DenseDistribution { m, p })
    }

    /// Uniform over an explicit support set of outcome indices.
    pub fn uniform_on(m: u32, support: &[usize]) -> Result<DenseDistribution> {
        if m > MAX_BITS {
            return Err(Error::SizeCap { m, cap: MAX_BITS });
        }
        if support.is_empty() {
            return Err(Error::BadDistribution(String::from("empty support")));
        }
        let size = 1usize << m;
        let mut p = vec![0.0; size];
        let mass = 1.0 / support.len() as f64;
        for &x in support {
            if x >= size {
                return Err(Error::BadDistribution(format!("outcome {x} out of range")));
            }
            if p[x] != 0.0 {
                return Err(Error::BadDistribution(format!("duplicate outcome {x}")));
            }
            p[x] = mass;
        }
        Ok(DenseDistribution { m, p })
    }

    /// Uniform over the even-parity outcomes.
    pub fn even_parity_uniform(m: u32) -> Result<DenseDistribution> {
        if m == 0 {
            return Err(Error::BadDistribution(String::from("need m >= 1")));
        }
        if m > MAX_BITS {
            return Err(Error::SizeCap { m, cap: MAX_BITS });
        }
        let size = 1usize << m;
        let mass = 2.0 / size as f64;
        let p = (0..size)
            .map(|x| if x.count_ones() % 2 == 0 { mass } else { 0.0 })
            .collect();
        Ok(DenseDistribution { m, p })
    }

    /// Independent positive random weights, normalized. Covers smooth
    /// spectra; see [`DenseDistribution::random_sparse`] for spiky ones.
    pub fn random_dense<R: RngCore + ?Sized>(m: u32, rng: &mut R) -> Result<DenseDistribution> {
        if m > MAX_BITS {
            return Err(Error::SizeCap { m, cap: MAX_BITS });
        }
        let w: Vec<f64> = (0..1usize << m)
            .map(|_| rng::uniform_f64(rng) + 1e-12)
            .collect();
        DenseDistribution::from_weights(m, &w)
    }

    /// Random weights on a random support of the given size.
    pub fn random_sparse<R: RngCore + ?Sized>(
        m: u32,
        support_size: usize,
        rng: &mut R,
    ) -> Result<DenseDistribution> {
        if m > MAX_BITS {
            return Err(Error::SizeCap { m, cap: MAX_BITS });
        }
        let size = 1usize << m;
        if support_size == 0 || support_size > size {
            return Err(Error::BadDistribution(format!(
                "support size {support_size} out of range"
            )));
        }
        // Floyd's sampling over outcome indices.
        let mut chosen = alloc::collections::BTreeSet::new();
        for j in (size - support_size)..size {
            let t = rng::uniform_index(rng, j + 1);
            if !chosen.insert(t) {
                chosen.insert(j);
            }
        }
        let mut w = vec![0.0; size];
        for &x in &chosen {
            w[x] = rng::uniform_f64(rng) + 1e-12;
        }
        DenseDistribution::from_weights(m, &w)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn size(&self) -> usize {
        self.p.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn prob(&self, x: usize) -> f64 {
        self.p[x]
    }

    pub fn support_size(&self) -> usize {
        self.p.iter().filter(|&&v| v > 0.0).count()
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        -self
            .p
            .iter()
            .filter(|&&v| v > 0.0)
            .map(|&v| v * math::log2(v))
            .sum::<f64>()
    }

    /// Min-entropy: `-log2(max probability)`.
    pub fn min_entropy(&self) -> f64 {
        let max = self.p.iter().cloned().fold(0.0f64, f64::max);
        -math::log2(max)
    }

    /// Distribution of the positions in `mask`, indexed by the mask bits
    /// in increasing position order.
    pub fn marginal(&self, mask: u32) -> Result<DenseDistribution> {
        if mask >> self.m != 0 {
            return Err(Error::BadDistribution(format!(
                "mask {mask:#x} has bits above position {}",
                self.m
            )));
        }
        let k = mask.count_ones();
        let mut out = vec![0.0; 1usize << k];
        for (x, &v) in self.p.iter().enumerate() {
            out[compress_bits(x, mask)] += v;
        }
        Ok(DenseDistribution { m: k, p: out })
    }

    /// Condition on an event over outcomes; errors if the event has
    /// probability zero.
    pub fn condition_event<F: Fn(usize) -> bool>(&self, event: F) -> Result<DenseDistribution> {
        let mut mass = 0.0;
        for (x, &v) in self.p.iter().enumerate() {
            if event(x) {
                mass += v;
            }
        }
        if mass <= 0.0 {
            return Err(Error::EmptyConditioningEvent);
        }
        let p = self
            .p
            .iter()
            .enumerate()
            .map(|(x, &v)| if event(x) { v / mass } else { 0.0 })
            .collect();
        Ok(DenseDistribution { m: self.m, p })
    }

    /// Condition on the positions in `mask` taking the given values
    /// (`value` uses the compressed indexing of [`Self::marginal`]), and
    /// return the distribution of the remaining positions.
    pub fn condition_on(&self, mask: u32, value: usize) -> Result<DenseDistribution> {
        let rest = !mask & ((1u32 << self.m) - 1);
        let cond = self.condition_event(|x| compress_bits(x, mask) == value)?;
        cond.marginal(rest)
    }

    /// `H(X_rest | X_mask)` by the chain rule `H(X) - H(X_mask)`.
    pub fn conditional_entropy(&self, mask: u32) -> Result<f64> {
        Ok(self.entropy() - self.marginal(mask)?.entropy())
    }
}

/// Gather the bits of `x` selected by `mask` into a compact index,
/// preserving position order.
pub fn compress_bits(x: usize, mask: u32) -> usize {
    let mut out = 0usize;
    let mut k = 0;
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros();
        out |= (x >> b & 1) << k;
        k += 1;
        m &= m - 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_entropies() {
        let d = DenseDistribution::uniform(6).unwrap();
        assert!((d.entropy() - 6.0).abs() < 1e-12);
        assert!((d.min_entropy() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn point_mass_entropies() {
        let d = DenseDistribution::point_mass(5, 9).unwrap();
        assert_eq!(d.entropy(), 0.0);
        assert_eq!(d.min_entropy(), -0.0);
    }

    #[test]
    fn closed_form_small_distribution() {
        // p = (3/4, 1/4): H = 2 - (3/4) log2 3, H_min = log2(4/3)
        let d = DenseDistribution::new(1, vec![0.75, 0.25]).unwrap();
        assert!((d.entropy() - 0.8112781244591328).abs() < 1e-12);
        assert!((d.min_entropy() - math::log2(4.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn min_entropy_never_exceeds_entropy() {
        let mut rng = rng::master(21);
        for m in 1..=8u32 {
            for _ in 0..50 {
                let d = DenseDistribution::random_dense(m, &mut rng).unwrap();
                assert!(d.min_entropy() <= d.entropy() + 1e-12);
                let s = DenseDistribution::random_sparse(m, (1usize << m) / 2 + 1, &mut rng).unwrap();
                assert!(s.min_entropy() <= s.entropy() + 1e-12);
            }
        }
    }

    #[test]
    fn marginal_and_conditionals() {
        // two perfectly correlated bits
        let d = DenseDistribution::new(2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let first = d.marginal(0b01).unwrap();
        assert_eq!(first.probs(), &[0.5, 0.5]);
        assert!((d.conditional_entropy(0b01).unwrap()).abs() < 1e-12);
        let cond = d.condition_on(0b01, 1).unwrap();
        assert_eq!(cond.probs(), &[0.0, 1.0]);
        assert!(d.condition_event(|x| x == 1).is_err());
    }

    #[test]
    fn even_parity_support() {
        let d = DenseDistribution::even_parity_uniform(4).unwrap();
        assert_eq!(d.support_size(), 8);
        assert!((d.entropy() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn compress_bits_order() {
        assert_eq!(compress_bits(0b1010, 0b1110), 0b101);
        assert_eq!(compress_bits(0b1010, 0b0101), 0b00);
        assert_eq!(compress_bits(0b0110, 0b0101), 0b10);
        assert_eq!(compress_bits(usize::MAX, 0b100100), 0b11);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(DenseDistribution::new(2, vec![0.5, 0.5]).is_err());
        assert!(DenseDistribution::new(1, vec![0.6, 0.5]).is_err());
        assert!(DenseDistribution::new(1, vec![-0.1, 1.1]).is_err());
        assert!(DenseDistribution::uniform(MAX_BITS + 1).is_err());
    }
}
