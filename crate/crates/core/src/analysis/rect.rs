//! Rectangles of inputs and the shift-XOR entropy condition.
//!
//! Elements of a rectangle side are pairs `(x1, x2)` of n-bit strings
//! packed into a `2n`-bit mask: `x1` occupies the low n bits, `x2` the
//! high n bits, each in the [`crate::bits::BitString::to_mask`] order.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::math;

use super::binomial::ratio_to_f64;
use super::dist::DenseDistribution;
use super::fourier;

/// Rotate the low `n` bits of `x` left by `i` (the mask-level cyclic
/// shift, matching `BitString::cyclic_shift`).
#[inline]
pub fn rotate_mask(x: u64, n: usize, i: usize) -> u64 {
    debug_assert!(i < n && n < 64);
    let mask = (1u64 << n) - 1;
    ((x << i) | (x >> (n - i))) & mask
}

fn check_side(name: &str, side: &[u64], n: usize) -> Result<()> {
    if side.is_empty() {
        return Err(Error::BadDistribution(format!("rectangle side {name} is empty")));
    }
    let limit = 1u64 << (2 * n);
    if side.iter().any(|&v| v >= limit) {
        return Err(Error::BadDistribution(format!(
            "rectangle side {name} has an element outside 2n={} bits",
            2 * n
        )));
    }
    Ok(())
}

/// A product set `A x B` of input pairs, given explicitly.
#[derive(Clone, Debug)]
pub struct RectanglePair {
    n: usize,
    a: Vec<u64>,
    b: Vec<u64>,
}

impl RectanglePair {
    pub fn new(n: usize, mut a: Vec<u64>, mut b: Vec<u64>) -> Result<RectanglePair> {
        if n == 0 || n > 10 {
            return Err(Error::SizeCap {
                m: n as u32,
                cap: 10,
            });
        }
        check_side("A", &a, n)?;
        check_side("B", &b, n)?;
        a.sort_unstable();
        a.dedup();
        b.sort_unstable();
        b.dedup();
        Ok(RectanglePair { n, a, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alice(&self) -> &[u64] {
        &self.a
    }

    pub fn bob(&self) -> &[u64] {
        &self.b
    }

    pub fn contains(&self, alice_half: u64, bob_half: u64) -> bool {
        self.a.binary_search(&alice_half).is_ok() && self.b.binary_search(&bob_half).is_ok()
    }
}

/// Exact masses of a rectangle under the two hard distributions.
#[derive(Clone, Debug)]
pub struct RectangleBias {
    pub uniform_mass: BigRational,
    pub planted_mass: BigRational,
    /// `planted_mass / uniform_mass`.
    pub ratio: BigRational,
}

impl RectangleBias {
    pub fn uniform_mass_f64(&self) -> f64 {
        ratio_to_f64(&self.uniform_mass)
    }

    pub fn planted_mass_f64(&self) -> f64 {
        ratio_to_f64(&self.planted_mass)
    }

    pub fn ratio_f64(&self) -> f64 {
        ratio_to_f64(&self.ratio)
    }
}

/// Exact rectangle masses: uniform mass `|A||B| / 2^(4n)` and the
/// planted mass averaged over the shift, using the closed-form density
/// `3^w 5^(n-w) / 2^(6n)` per shift. Exact rationals; n <= 6.
pub fn rectangle_bias(rect: &RectanglePair) -> Result<RectangleBias> {
    let n = rect.n();
    if n > 6 {
        return Err(Error::SizeCap {
            m: n as u32,
            cap: 6,
        });
    }
    let low = (1u64 << n) - 1;

    // 3^w 5^(n-w) numerators, w = 0..=n
    let weight_numer: Vec<BigInt> = (0..=n)
        .map(|w| BigInt::from(3u32).pow(w as u32) * BigInt::from(5u32).pow((n - w) as u32))
        .collect();

    let mut planted_numer = BigInt::from(0u32);
    for &alice in rect.alice() {
        let (x1, x2) = (alice & low, alice >> n);
        for &bob in rect.bob() {
            let (y1, y2) = (bob & low, bob >> n);
            let u = x1 ^ y1;
            let v = x2 ^ y2;
            for i in 0..n {
                let w = (rotate_mask(u, n, i) ^ v).count_ones() as usize;
                planted_numer += &weight_numer[w];
            }
        }
    }
    // divide by n (shift average) and 2^(6n) (density denominator)
    let planted_mass = BigRational::new(
        planted_numer,
        BigInt::from(n as u32) * (BigInt::from(1u32) << (6 * n)),
    );
    let uniform_mass = BigRational::new(
        BigInt::from(rect.alice().len() as u64) * BigInt::from(rect.bob().len() as u64),
        BigInt::from(1u32) << (4 * n),
    );
    let ratio = &planted_mass / &uniform_mass;
    Ok(RectangleBias {
        uniform_mass,
        planted_mass,
        ratio,
    })
}

/// Distribution of `shift_i(X1) ^ X2` when `(X1, X2)` is uniform on the
/// given set of `2n`-bit elements.
pub fn shift_xor_distribution(a: &[u64], n: usize, i: usize) -> Result<DenseDistribution> {
    if n == 0 || n > 14 {
        return Err(Error::SizeCap {
            m: n as u32,
            cap: 14,
        });
    }
    if i >= n {
        return Err(Error::ShiftOutOfRange { index: i, n });
    }
    check_side("A", a, n)?;
    let low = (1u64 << n) - 1;
    let mass = 1.0 / a.len() as f64;
    let mut p = vec![0.0f64; 1usize << n];
    for &elem in a {
        let z = rotate_mask(elem & low, n, i) ^ (elem >> n);
        p[z as usize] += mass;
    }
    DenseDistribution::new(n as u32, p)
}

/// The entropy condition of a set: `E_i[H(shift_i(X1) ^ T_{1/4}(X2))]`
/// for `(X1, X2)` uniform on `a`, the quantity a protocol rectangle must
/// keep below `n` by a constant for the lower bound to bite. n <= 14.
pub fn rectangle_entropy_condition(a: &[u64], n: usize) -> Result<f64> {
    let mut total = 0.0f64;
    for i in 0..n {
        let z = shift_xor_distribution(a, n, i)?;
        total += fourier::apply_noise(&z, 0.25)?.entropy();
    }
    Ok(total / n as f64)
}

/// All `2n`-bit masks of even parity (the classic full-entropy
/// counterexample to the noiseless condition).
pub fn even_parity_set(bits: u32) -> Vec<u64> {
    (0..1u64 << bits)
        .filter(|v| v.count_ones() % 2 == 0)
        .collect()
}

/// Evaluation of the condition/conclusion pair linking the entropy
/// condition to min-entropy.
#[derive(Clone, Debug)]
pub struct EntropyBoundOutcome {
    /// `E_i[H(shift_i(X1) ^ T_{1/4}(X2))]`.
    pub condition_value: f64,
    /// `n - condition_value`.
    pub delta: f64,
    pub min_entropy: f64,
    /// `2n - sqrt(delta * n) / 29`.
    pub bound_rhs: f64,
    /// Whether the implication (condition => min-entropy bound) is
    /// consistent for this distribution.
    pub consistent: bool,
}

/// Evaluates, for a distribution on `n + n` bits, the noisy shift-XOR
/// entropy condition and the min-entropy conclusion it should force:
/// a distribution satisfying `condition_value <= n - delta` with
/// `H_min > 2n - sqrt(delta n)/29` would be a counterexample. n <= 10.
pub fn entropy_bound_evaluator(nu: &DenseDistribution) -> Result<EntropyBoundOutcome> {
    let m = nu.m();
    if m % 2 != 0 {
        return Err(Error::Config(String::from("need an even number of bits")));
    }
    let n = (m / 2) as usize;
    if n == 0 || n > 10 {
        return Err(Error::SizeCap {
            m: n as u32,
            cap: 10,
        });
    }
    let low = (1u64 << n) - 1;

    let mut total = 0.0f64;
    for i in 0..n {
        let mut p = vec![0.0f64; 1usize << n];
        for (x, &v) in nu.probs().iter().enumerate() {
            if v > 0.0 {
                let z = rotate_mask(x as u64 & low, n, i) ^ (x as u64 >> n);
                p[z as usize] += v;
            }
        }
        let z = DenseDistribution::new(n as u32, p)?;
        total += fourier::apply_noise(&z, 0.25)?.entropy();
    }
    let condition_value = total / n as f64;
    let delta = n as f64 - condition_value;
    let min_entropy = nu.min_entropy();
    let bound_rhs = 2.0 * n as f64 - math::sqrt(delta.max(0.0) * n as f64) / 29.0;
    Ok(EntropyBoundOutcome {
        condition_value,
        delta,
        min_entropy,
        bound_rhs,
        consistent: delta <= 1e-12 || min_entropy <= bound_rhs + 1e-9,
    })
}
