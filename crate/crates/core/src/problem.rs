//! The shifted approximate equality promise problem: instances, promise
//! classification, and the input distributions used by the protocols.
//!
//! An instance is a tuple `(x1, x2, y1, y2)` of n-bit strings. For a
//! shift `i` the relevant quantity is the weight
//! `w(i) = |shift_i(x1) ^ x2 ^ shift_i(y1) ^ y2|`. The answer is 1 when
//! some shift has `w <= 2n/5`, 0 when every shift has `7n/15 <= w <=
//! 8n/15`, and the instance is otherwise outside the promise. All
//! threshold comparisons are done in exact integers (`15*w` against
//! `6n`, `7n`, `8n`), so small-n classifications are unambiguous. The
//! 0-band `[ceil(7n/15), floor(8n/15)]` is empty for some small n (it
//! is at n = 3) and first spans more than a single integer at n = 15.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand_core::RngCore;

use crate::bits::{BitString, ShiftIndex};
use crate::error::{Error, Result};
use crate::rng;

/// Noise rate applied to the planted half of the hard distribution.
pub const PLANT_NOISE: f64 = 0.375;

/// Overall promise classification of an instance.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum PromiseClass {
    One,
    Zero,
    Undefined,
}

impl core::fmt::Display for PromiseClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            PromiseClass::One => "one",
            PromiseClass::Zero => "zero",
            PromiseClass::Undefined => "undefined",
        })
    }
}

/// Classification of a single shift: the per-shift subproblem answers 1
/// when `w <= 2n/5`, 0 when `w` lies in the `[7n/15, 8n/15]` band, and is
/// undefined in the gap between.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ShiftClass {
    One,
    Zero,
    Gap,
}

/// One problem input: four strings of a common length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShapInstance {
    x1: BitString,
    x2: BitString,
    y1: BitString,
    y2: BitString,
}

impl ShapInstance {
    pub fn new(x1: BitString, x2: BitString, y1: BitString, y2: BitString) -> Result<ShapInstance> {
        let n = x1.len();
        for s in [&x2, &y1, &y2] {
            if s.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: s.len(),
                });
            }
        }
        if n == 0 {
            return Err(Error::Config(String::from("instance length must be >= 1")));
        }
        Ok(ShapInstance { x1, x2, y1, y2 })
    }

    pub fn n(&self) -> usize {
        self.x1.len()
    }

    pub fn x1(&self) -> &BitString {
        &self.x1
    }

    pub fn x2(&self) -> &BitString {
        &self.x2
    }

    pub fn y1(&self) -> &BitString {
        &self.y1
    }

    pub fn y2(&self) -> &BitString {
        &self.y2
    }

    /// `|shift_i(x1) ^ x2 ^ shift_i(y1) ^ y2|`.
    ///
    /// Shifts distribute over XOR, so this equals
    /// `|shift_i(x1 ^ y1) ^ (x2 ^ y2)|`.
    pub fn shift_xor_weight(&self, i: ShiftIndex) -> Result<usize> {
        let u = self.x1.xor(&self.y1)?;
        let v = self.x2.xor(&self.y2)?;
        u.cyclic_shift(i)?.xor_weight(&v)
    }

    /// The weights at every shift `0..n`.
    pub fn shift_weights(&self) -> Vec<usize> {
        let u = self.x1.xor(&self.y1).expect("equal lengths");
        let v = self.x2.xor(&self.y2).expect("equal lengths");
        (0..self.n())
            .map(|i| {
                u.cyclic_shift(ShiftIndex(i))
                    .expect("valid shift")
                    .xor_weight(&v)
                    .expect("equal lengths")
            })
            .collect()
    }

    /// Exact promise classification (integer arithmetic only).
    pub fn classify(&self) -> PromiseClass {
        let n = self.n();
        let mut all_in_band = true;
        let mut any_one = false;
        for w in self.shift_weights() {
            let t = 15 * w;
            if t <= 6 * n {
                any_one = true;
            }
            if !(7 * n <= t && t <= 8 * n) {
                all_in_band = false;
            }
        }
        if any_one {
            PromiseClass::One
        } else if all_in_band {
            PromiseClass::Zero
        } else {
            PromiseClass::Undefined
        }
    }

    /// Per-shift classification of the subproblem at shift `i`.
    pub fn class_at_shift(&self, i: ShiftIndex) -> Result<ShiftClass> {
        let n = self.n();
        let t = 15 * self.shift_xor_weight(i)?;
        Ok(if t <= 6 * n {
            ShiftClass::One
        } else if 7 * n <= t && t <= 8 * n {
            ShiftClass::Zero
        } else {
            ShiftClass::Gap
        })
    }
}

/// Canonical text form: `n=<int> x1=<hex> x2=<hex> y1=<hex> y2=<hex>`.
impl core::fmt::Display for ShapInstance {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "n={} x1={} x2={} y1={} y2={}",
            self.n(),
            self.x1.to_hex(),
            self.x2.to_hex(),
            self.y1.to_hex(),
            self.y2.to_hex()
        )
    }
}

impl core::str::FromStr for ShapInstance {
    type Err = Error;

    fn from_str(s: &str) -> Result<ShapInstance> {
        let mut fields = s.split_whitespace();
        let mut expect = |prefix: &str| -> Result<String> {
            let tok = fields
                .next()
                .ok_or_else(|| Error::Parse(format!("missing field {prefix}")))?;
            tok.strip_prefix(prefix)
                .map(String::from)
                .ok_or_else(|| Error::Parse(format!("expected {prefix}..., got {tok:?}")))
        };
        let n: usize = expect("n=")?
            .parse()
            .map_err(|_| Error::Parse(String::from("bad length field")))?;
        let x1 = BitString::from_hex(n, &expect("x1=")?)?;
        let x2 = BitString::from_hex(n, &expect("x2=")?)?;
        let y1 = BitString::from_hex(n, &expect("y1=")?)?;
        let y2 = BitString::from_hex(n, &expect("y2=")?)?;
        ShapInstance::new(x1, x2, y1, y2)
    }
}

/// Which input distribution to draw from.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DistKind {
    /// Four independent uniform strings.
    Uniform,
    /// Planted agreement at the given shift, with noise on `x1`.
    PlantedAt(ShiftIndex),
    /// Planted agreement at a uniformly random shift.
    Planted,
    /// Fair mixture of `Uniform` and `Planted`.
    Mixed,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct DistSpec {
    pub kind: DistKind,
    pub n: usize,
}

impl DistSpec {
    pub fn new(kind: DistKind, n: usize) -> Result<DistSpec> {
        if n == 0 {
            return Err(Error::Config(String::from("distribution needs n >= 1")));
        }
        if let DistKind::PlantedAt(i) = kind {
            i.validate(n)?;
        }
        Ok(DistSpec { kind, n })
    }
}

/// Draw an instance. Draw order is fixed (documented per kind) so a seed
/// pins the result exactly.
pub fn sample<R: RngCore + ?Sized>(spec: &DistSpec, rng: &mut R) -> Result<ShapInstance> {
    let n = spec.n;
    match spec.kind {
        DistKind::Uniform => {
            let x1 = BitString::uniform(n, rng);
            let x2 = BitString::uniform(n, rng);
            let y1 = BitString::uniform(n, rng);
            let y2 = BitString::uniform(n, rng);
            ShapInstance::new(x1, x2, y1, y2)
        }
        DistKind::PlantedAt(i) => sample_planted(n, i, PLANT_NOISE, rng),
        DistKind::Planted => {
            let i = ShiftIndex(rng::uniform_index(rng, n));
            sample_planted(n, i, PLANT_NOISE, rng)
        }
        DistKind::Mixed => {
            let coin = rng::uniform_index(rng, 2);
            let inner = if coin == 0 {
                DistKind::Uniform
            } else {
                DistKind::Planted
            };
            sample(&DistSpec { kind: inner, n }, rng)
        }
    }
}

/// Planted sampler with an explicit noise rate: draws `x1, x2, y1`
/// uniformly, sets `y2 = shift_i(x1) ^ x2 ^ shift_i(y1)` so the weight at
/// shift `i` is zero, then replaces `x1` by its noisy copy. `noise = 0`
/// is the deterministic test hook; the hard distribution uses
/// [`PLANT_NOISE`].
pub fn sample_planted<R: RngCore + ?Sized>(
    n: usize,
    i: ShiftIndex,
    noise: f64,
    rng: &mut R,
) -> Result<ShapInstance> {
    i.validate(n)?;
    let x1 = BitString::uniform(n, rng);
    let x2 = BitString::uniform(n, rng);
    let y1 = BitString::uniform(n, rng);
    let y2 = x1.cyclic_shift(i)?.xor(&x2)?.xor(&y1.cyclic_shift(i)?)?;
    let x1_noisy = x1.noise_sample(noise, rng)?;
    ShapInstance::new(x1_noisy, x2, y1, y2)
}

/// Exact density of the planted-at-shift-`i` distribution at `inst`.
///
/// Conditioning on the planted identity fixes the pre-noise `x1`
/// uniquely, so the density collapses to
/// `2^(-3n) * (3/8)^w * (5/8)^(n-w)` with `w` the shift-XOR weight at
/// `i`. Exact rationals; requires n <= 64.
pub fn planted_density(inst: &ShapInstance, i: ShiftIndex) -> Result<BigRational> {
    let n = inst.n();
    if n > 64 {
        return Err(Error::SizeCap {
            m: n as u32,
            cap: 64,
        });
    }
    let w = inst.shift_xor_weight(i)? as u32;
    let numer = int_pow(3, w) * int_pow(5, n as u32 - w);
    let denom = int_pow(2, 6 * n as u32);
    Ok(BigRational::new(numer, denom))
}

fn int_pow(base: u32, exp: u32) -> BigInt {
    let mut acc = BigInt::from(1u32);
    let b = BigInt::from(base);
    for _ in 0..exp {
        acc *= &b;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use alloc::string::ToString;
    use alloc::vec;
    use core::str::FromStr;

    fn uniform_instance(n: usize, seed: u64) -> ShapInstance {
        let mut rng = rng::master(seed);
        sample(&DistSpec::new(DistKind::Uniform, n).unwrap(), &mut rng).unwrap()
    }

    /// The definitional route: shift all four strings, XOR bit by bit.
    fn weight_by_definition(inst: &ShapInstance, i: ShiftIndex) -> usize {
        let n = inst.n();
        let sx1 = inst.x1().cyclic_shift(i).unwrap();
        let sy1 = inst.y1().cyclic_shift(i).unwrap();
        (1..=n)
            .filter(|&p| {
                sx1.bit(p).unwrap()
                    ^ inst.x2().bit(p).unwrap()
                    ^ sy1.bit(p).unwrap()
                    ^ inst.y2().bit(p).unwrap()
            })
            .count()
    }

    #[test]
    fn shift_xor_weight_matches_definition() {
        let inst = uniform_instance(8, 10);
        for i in 0..8 {
            assert_eq!(
                inst.shift_xor_weight(ShiftIndex(i)).unwrap(),
                weight_by_definition(&inst, ShiftIndex(i))
            );
        }
    }

    #[test]
    fn all_zero_instance_has_zero_weights() {
        let z = BitString::zeros(6);
        let inst = ShapInstance::new(z.clone(), z.clone(), z.clone(), z).unwrap();
        assert!(inst.shift_weights().iter().all(|&w| w == 0));
        assert_eq!(inst.classify(), PromiseClass::One);
    }

    #[test]
    fn equal_first_halves_cancel_shifts() {
        // x1 == y1 makes every shift weight equal |x2 ^ y2|.
        let mut rng = rng::master(11);
        let x1 = BitString::uniform(9, &mut rng);
        let x2 = BitString::uniform(9, &mut rng);
        let u = BitString::random_of_weight(9, 4, &mut rng).unwrap();
        let y2 = x2.xor(&u).unwrap();
        let inst = ShapInstance::new(x1.clone(), x2, x1, y2).unwrap();
        assert!(inst.shift_weights().iter().all(|&w| w == 4));
    }

    #[test]
    fn classify_thresholds_at_n15() {
        let mut rng = rng::master(12);
        let n = 15;
        let x1 = BitString::uniform(n, &mut rng);
        let x2 = BitString::uniform(n, &mut rng);
        // weight 7 at every shift -> in [7n/15, 8n/15] = [7, 8] -> zero
        let mk = |w| {
            let u = BitString::random_of_weight(n, w, &mut rng::master(99 + w as u64)).unwrap();
            ShapInstance::new(x1.clone(), x2.clone(), x1.clone(), x2.xor(&u).unwrap()).unwrap()
        };
        assert_eq!(mk(0).classify(), PromiseClass::One);
        assert_eq!(mk(6).classify(), PromiseClass::One);
        assert_eq!(mk(7).classify(), PromiseClass::Zero);
        assert_eq!(mk(8).classify(), PromiseClass::Zero);
        assert_eq!(mk(9).classify(), PromiseClass::Undefined);
        assert_eq!(mk(13).classify(), PromiseClass::Undefined);
    }

    #[test]
    fn zero_band_is_empty_at_n3() {
        // no weight satisfies 21 <= 15w <= 24, so nothing classifies 0
        let z = BitString::zeros(3);
        for w in 0..=3usize {
            let u = BitString::random_of_weight(3, w, &mut rng::master(w as u64)).unwrap();
            let inst = ShapInstance::new(z.clone(), z.clone(), z.clone(), u).unwrap();
            let expect = if w <= 1 {
                PromiseClass::One
            } else {
                PromiseClass::Undefined
            };
            assert_eq!(inst.classify(), expect, "w={w}");
        }
    }

    #[test]
    fn per_shift_classes() {
        let n = 30;
        let mut rng = rng::master(13);
        let x1 = BitString::uniform(n, &mut rng);
        let x2 = BitString::uniform(n, &mut rng);
        let mk = |w| {
            let u = BitString::random_of_weight(n, w, &mut rng::master(7 + w as u64)).unwrap();
            ShapInstance::new(x1.clone(), x2.clone(), x1.clone(), x2.xor(&u).unwrap()).unwrap()
        };
        assert_eq!(mk(12).class_at_shift(ShiftIndex(0)).unwrap(), ShiftClass::One);
        assert_eq!(mk(13).class_at_shift(ShiftIndex(0)).unwrap(), ShiftClass::Gap);
        assert_eq!(mk(14).class_at_shift(ShiftIndex(0)).unwrap(), ShiftClass::Zero);
        assert_eq!(mk(16).class_at_shift(ShiftIndex(0)).unwrap(), ShiftClass::Zero);
        assert_eq!(mk(17).class_at_shift(ShiftIndex(0)).unwrap(), ShiftClass::Gap);
    }

    #[test]
    fn planted_noiseless_has_zero_weight_at_shift() {
        for n in [3usize, 8, 17] {
            for i in [0usize, 1, n - 1] {
                let mut rng = rng::master((n * 31 + i) as u64);
                let inst = sample_planted(n, ShiftIndex(i), 0.0, &mut rng).unwrap();
                assert_eq!(inst.shift_xor_weight(ShiftIndex(i)).unwrap(), 0);
                assert_eq!(inst.classify(), PromiseClass::One);
            }
        }
    }

    #[test]
    fn text_form_round_trips() {
        let inst = uniform_instance(13, 14);
        let text = inst.to_string();
        let back = ShapInstance::from_str(&text).unwrap();
        assert_eq!(back, inst);
        assert!(text.starts_with("n=13 x1="));
        assert!(ShapInstance::from_str("n=4 x1=8 x2=0 y1=0").is_err());
        assert!(ShapInstance::from_str("n=4 x2=8 x1=0 y1=0 y2=0").is_err());
        assert!(ShapInstance::from_str("n=4 x1=88 x2=0 y1=0 y2=0").is_err());
    }

    #[test]
    fn density_depends_only_on_weight() {
        let n = 5;
        let i = ShiftIndex(2);
        let mut rng = rng::master(15);
        let mut by_weight: vec::Vec<Option<BigRational>> = vec![None; n + 1];
        for _ in 0..200 {
            let inst = sample(&DistSpec::new(DistKind::Uniform, n).unwrap(), &mut rng).unwrap();
            let w = inst.shift_xor_weight(i).unwrap();
            let d = planted_density(&inst, i).unwrap();
            match &by_weight[w] {
                None => by_weight[w] = Some(d),
                Some(prev) => assert_eq!(*prev, d),
            }
        }
    }

    #[test]
    fn density_closed_form_at_weight_zero() {
        // weight 0 -> 5^n / 2^(6n)
        let n = 4;
        let mut rng = rng::master(16);
        let inst = sample_planted(n, ShiftIndex(1), 0.0, &mut rng).unwrap();
        let d = planted_density(&inst, ShiftIndex(1)).unwrap();
        let expect = BigRational::new(BigInt::from(625), BigInt::from(1u64 << 24));
        assert_eq!(d, expect);
    }

    #[test]
    fn density_normalizes_at_n3() {
        let n = 3usize;
        let i = ShiftIndex(1);
        let mut total = BigRational::new(BigInt::from(0), BigInt::from(1));
        for bits in 0u32..(1 << (4 * n)) {
            let field = |k: usize| {
                BitString::from_mask(n, (bits as u64 >> (k * n)) & ((1 << n) - 1)).unwrap()
            };
            let inst = ShapInstance::new(field(0), field(1), field(2), field(3)).unwrap();
            total += planted_density(&inst, i).unwrap();
        }
        assert_eq!(total, BigRational::new(BigInt::from(1), BigInt::from(1)));
    }

    #[test]
    fn classify_invariant_under_simultaneous_shift_relabel() {
        // shifting x1 and y1 by the same amount permutes the shift
        // weights, so the class is unchanged.
        for seed in 0..20u64 {
            let inst = uniform_instance(12, 1000 + seed);
            let class = inst.classify();
            for j in 0..12 {
                let s = ShiftIndex(j);
                let relabeled = ShapInstance::new(
                    inst.x1().cyclic_shift(s).unwrap(),
                    inst.x2().clone(),
                    inst.y1().cyclic_shift(s).unwrap(),
                    inst.y2().clone(),
                )
                .unwrap();
                assert_eq!(relabeled.classify(), class);
                let mut ws = inst.shift_weights();
                let mut ws2 = relabeled.shift_weights();
                ws.sort_unstable();
                ws2.sort_unstable();
                assert_eq!(ws, ws2);
            }
        }
    }

    #[test]
    fn planted_sampler_matches_density_chi_squared() {
        // n=3: 4096 cells, 1e5 draws, expected count >= 10 in every cell;
        // threshold is the 99.9% point of chi2 with 4095 dof.
        let n = 3usize;
        let i = ShiftIndex(2);
        let cells = 1usize << (4 * n);
        let trials = 100_000usize;
        let mut counts = vec![0u32; cells];
        let mut rng = rng::master(17);
        for _ in 0..trials {
            let inst = sample(&DistSpec::new(DistKind::PlantedAt(i), n).unwrap(), &mut rng).unwrap();
            let idx = (inst.x1().to_mask().unwrap()
                | inst.x2().to_mask().unwrap() << n
                | inst.y1().to_mask().unwrap() << (2 * n)
                | inst.y2().to_mask().unwrap() << (3 * n)) as usize;
            counts[idx] += 1;
        }
        let mut stat = 0.0f64;
        for idx in 0..cells {
            let field = |k: usize| {
                BitString::from_mask(n, (idx as u64 >> (k * n)) & ((1 << n) - 1)).unwrap()
            };
            let inst = ShapInstance::new(field(0), field(1), field(2), field(3)).unwrap();
            let p = crate::analysis::binomial::ratio_to_f64(&planted_density(&inst, i).unwrap());
            let expect = p * trials as f64;
            let d = counts[idx] as f64 - expect;
            stat += d * d / expect;
        }
        assert!(stat < 4400.0, "chi2 stat {stat} over 4095 dof");
    }

    #[test]
    fn quarter_noise_collision_matches_closed_form() {
        // second density route: the planted density equals
        // Pr[shift_i(x1) ^ T_{1/4}(x2) = shift_i(y1) ^ T_{1/4}(y2)] / 2^(3n),
        // and that collision probability is the convolution of two
        // quarter-noise kernels evaluated at the shift-XOR string
        let quarter = |n: usize, w: u32| -> BigRational {
            // (1/4)^w (3/4)^(n-w)
            BigRational::new(
                int_pow(3, n as u32 - w),
                int_pow(2, 2 * n as u32),
            )
        };
        for n in [3usize, 4] {
            let i = ShiftIndex(1);
            for d_mask in 0u64..1 << n {
                let d = BitString::from_mask(n, d_mask).unwrap();
                // sum over z of q(z) q(z ^ d), exact
                let mut collision = BigRational::new(BigInt::from(0), BigInt::from(1));
                for z_mask in 0u64..1 << n {
                    let z = BitString::from_mask(n, z_mask).unwrap();
                    let z2 = z.xor(&d).unwrap();
                    collision +=
                        quarter(n, z.weight() as u32) * quarter(n, z2.weight() as u32);
                }
                // with x1 = y1 = x2 = 0 the shift-XOR string is y2 = d
                let zero = BitString::zeros(n);
                let inst =
                    ShapInstance::new(zero.clone(), zero.clone(), zero.clone(), d.clone())
                        .unwrap();
                assert_eq!(inst.shift_xor_weight(i).unwrap(), d.weight());
                let via_collision =
                    collision / BigRational::new(int_pow(2, 3 * n as u32), BigInt::from(1));
                assert_eq!(planted_density(&inst, i).unwrap(), via_collision, "n={n} d={d_mask:b}");
            }
        }
    }

    #[test]
    fn mixed_sampling_is_deterministic_per_seed() {
        let spec = DistSpec::new(DistKind::Mixed, 16).unwrap();
        let a = sample(&spec, &mut rng::for_trial(5, 3)).unwrap();
        let b = sample(&spec, &mut rng::for_trial(5, 3)).unwrap();
        assert_eq!(a, b);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn text_round_trips(n in 1usize..120, seed in any::<u64>()) {
                let inst = uniform_instance(n, seed);
                let back = ShapInstance::from_str(&inst.to_string()).unwrap();
                prop_assert_eq!(back, inst);
            }

            #[test]
            fn weight_multiset_invariant_under_relabel(
                n in 2usize..40,
                seed in any::<u64>(),
                j in 0usize..40,
            ) {
                let inst = uniform_instance(n, seed);
                let s = ShiftIndex(j % n);
                let relabeled = ShapInstance::new(
                    inst.x1().cyclic_shift(s).unwrap(),
                    inst.x2().clone(),
                    inst.y1().cyclic_shift(s).unwrap(),
                    inst.y2().clone(),
                ).unwrap();
                let mut a = inst.shift_weights();
                let mut b = relabeled.shift_weights();
                a.sort_unstable();
                b.sort_unstable();
                prop_assert_eq!(a, b);
                prop_assert_eq!(relabeled.classify(), inst.classify());
            }

            #[test]
            fn planted_weight_zero_at_any_shift(n in 1usize..80, i in 0usize..80, seed in any::<u64>()) {
                let i = ShiftIndex(i % n);
                let inst = sample_planted(n, i, 0.0, &mut rng::master(seed)).unwrap();
                prop_assert_eq!(inst.shift_xor_weight(i).unwrap(), 0);
            }
        }
    }
}
