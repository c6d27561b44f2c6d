//! Packed bitstring algebra: cyclic shifts, XOR, Hamming weight, noise
//! sampling and subset restriction.
//!
//! Positions are 1-indexed in the public API, matching the usual notation
//! for these problems; internally bit `j` lives in word `(j-1)/64` at bit
//! offset `(j-1)%64`. Every operation is O(n/64) words except the ones
//! that are inherently per-bit (noise, restriction).
//!
//! The canonical text form of a bitstring is big-endian hex with bit 1 as
//! the most significant bit, zero-padded to `ceil(n/4)` digits.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::rng;

/// Cyclic shift amount `i`; valid range is `0..n` for strings of length n.
///
/// The shift moves the bit at position `j` to position `i + j` (wrapping
/// past `n` back to `1`), so shifting by 0 is the identity.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShiftIndex(pub usize);

impl ShiftIndex {
    pub fn validate(self, n: usize) -> Result<()> {
        if n == 0 || self.0 >= n {
            return Err(Error::ShiftOutOfRange { index: self.0, n });
        }
        Ok(())
    }

    /// Image of 1-based position `pos` under the shift.
    pub fn position_image(self, pos: usize, n: usize) -> usize {
        let s = pos + self.0;
        if s <= n {
            s
        } else {
            s - n
        }
    }

    /// Image of a 0-based index under the shift.
    #[inline]
    pub(crate) fn index_image0(self, j0: usize, n: usize) -> usize {
        let s = j0 + self.0;
        if s < n {
            s
        } else {
            s - n
        }
    }

    /// The inverse shift, i.e. shifting by `n - i`.
    pub fn inverse(self, n: usize) -> ShiftIndex {
        ShiftIndex((n - self.0 % n) % n)
    }
}

/// Fixed-length binary string, packed into machine words.
///
/// The length is immutable after construction; operations on mismatched
/// lengths are errors. Length 0 is allowed (it arises as the restriction
/// to an empty index set).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

fn top_mask(n: usize) -> u64 {
    if n % 64 == 0 {
        u64::MAX
    } else {
        (1u64 << (n % 64)) - 1
    }
}

impl BitString {
    pub fn zeros(n: usize) -> BitString {
        BitString {
            n,
            words: vec![0; word_count(n)],
        }
    }

    pub fn ones(n: usize) -> BitString {
        let mut words = vec![u64::MAX; word_count(n)];
        if let Some(last) = words.last_mut() {
            *last &= top_mask(n);
        }
        BitString { n, words }
    }

    /// Bits in position order: `bits[0]` is position 1.
    pub fn from_bits(bits: &[bool]) -> BitString {
        let mut s = BitString::zeros(bits.len());
        for (j0, &b) in bits.iter().enumerate() {
            if b {
                s.words[j0 / 64] |= 1u64 << (j0 % 64);
            }
        }
        s
    }

    /// Uniformly random string of length n.
    pub fn uniform<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> BitString {
        let mut words: Vec<u64> = (0..word_count(n)).map(|_| rng.next_u64()).collect();
        if let Some(last) = words.last_mut() {
            *last &= top_mask(n);
        }
        BitString { n, words }
    }

    /// Uniformly random string of length n with exactly `w` ones.
    pub fn random_of_weight<R: RngCore + ?Sized>(n: usize, w: usize, rng: &mut R) -> Result<BitString> {
        if w > n {
            return Err(Error::Config(alloc::format!(
                "weight {w} exceeds length {n}"
            )));
        }
        // Floyd's sampling: w distinct positions, uniform over subsets.
        let mut out = BitString::zeros(n);
        for j in (n - w + 1)..=n {
            let t = rng::uniform_index(rng, j) + 1;
            let pos = if out.bit(t)? { j } else { t };
            out.set_bit(pos, true)?;
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Bit at 1-based position `pos`.
    pub fn bit(&self, pos: usize) -> Result<bool> {
        if pos == 0 || pos > self.n {
            return Err(Error::PositionOutOfRange { pos, n: self.n });
        }
        let j0 = pos - 1;
        Ok(self.words[j0 / 64] >> (j0 % 64) & 1 == 1)
    }

    pub fn set_bit(&mut self, pos: usize, value: bool) -> Result<()> {
        if pos == 0 || pos > self.n {
            return Err(Error::PositionOutOfRange { pos, n: self.n });
        }
        let j0 = pos - 1;
        if value {
            self.words[j0 / 64] |= 1u64 << (j0 % 64);
        } else {
            self.words[j0 / 64] &= !(1u64 << (j0 % 64));
        }
        Ok(())
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        self.check_len(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitString { n: self.n, words })
    }

    /// `|x ^ y|` without materialising the XOR.
    pub fn xor_weight(&self, other: &BitString) -> Result<usize> {
        self.check_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    pub fn complement(&self) -> BitString {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if let Some(last) = words.last_mut() {
            *last &= top_mask(self.n);
        }
        BitString { n: self.n, words }
    }

    /// Cyclic shift: the output holds this string's bit `j` at position
    /// `i + j` (wrapping), so `cyclic_shift(x, 0) == x`.
    pub fn cyclic_shift(&self, i: ShiftIndex) -> Result<BitString> {
        i.validate(self.n)?;
        if i.0 == 0 {
            return Ok(self.clone());
        }
        let lo = self.shifted_up(i.0);
        let hi = self.shifted_down(self.n - i.0);
        let mut words: Vec<u64> = lo.iter().zip(&hi).map(|(a, b)| a | b).collect();
        if let Some(last) = words.last_mut() {
            *last &= top_mask(self.n);
        }
        Ok(BitString { n: self.n, words })
    }

    /// Words of `self` shifted towards higher positions by `s` bits.
    fn shifted_up(&self, s: usize) -> Vec<u64> {
        let nw = self.words.len();
        let (sw, sb) = (s / 64, s % 64);
        let mut out = vec![0u64; nw];
        for k in sw..nw {
            let mut w = self.words[k - sw] << sb;
            if sb > 0 && k > sw {
                w |= self.words[k - sw - 1] >> (64 - sb);
            }
            out[k] = w;
        }
        out
    }

    /// Words of `self` shifted towards lower positions by `s` bits.
    fn shifted_down(&self, s: usize) -> Vec<u64> {
        let nw = self.words.len();
        let (sw, sb) = (s / 64, s % 64);
        let mut out = vec![0u64; nw];
        for k in 0..nw.saturating_sub(sw) {
            let mut w = self.words[k + sw] >> sb;
            if sb > 0 && k + sw + 1 < nw {
                w |= self.words[k + sw + 1] << (64 - sb);
            }
            out[k] = w;
        }
        out
    }

    /// Restriction `x_S`: bits at the (strictly increasing, 1-based)
    /// indices of `S`, in increasing index order.
    pub fn restrict(&self, indices: &[usize]) -> Result<BitString> {
        let mut prev = 0usize;
        for &idx in indices {
            if idx <= prev || idx > self.n {
                return Err(Error::BadIndexSet { n: self.n });
            }
            prev = idx;
        }
        let mut out = BitString::zeros(indices.len());
        for (k, &idx) in indices.iter().enumerate() {
            if self.bit(idx)? {
                out.set_bit(k + 1, true)?;
            }
        }
        Ok(out)
    }

    /// Flip every bit independently with probability `delta`.
    pub fn noise_sample<R: RngCore + ?Sized>(&self, delta: f64, rng: &mut R) -> Result<BitString> {
        if !(0.0..=0.5).contains(&delta) {
            return Err(Error::NoiseRateOutOfRange { value: delta });
        }
        let mut out = self.clone();
        for j0 in 0..self.n {
            if rng::bernoulli(rng, delta) {
                out.words[j0 / 64] ^= 1u64 << (j0 % 64);
            }
        }
        Ok(out)
    }

    /// Value with bit 1 as the most significant bit; length must be at
    /// most 64.
    pub fn to_value(&self) -> Result<u64> {
        if self.n > 64 {
            return Err(Error::Config(alloc::format!(
                "to_value needs n <= 64, got {}",
                self.n
            )));
        }
        let mut v = 0u64;
        for pos in 1..=self.n {
            v = (v << 1) | self.bit(pos)? as u64;
        }
        Ok(v)
    }

    /// Low-endian mask: bit `j` of the result is position `j+1`. Handy as
    /// an index into dense tables; length must be at most 64.
    pub fn to_mask(&self) -> Result<u64> {
        if self.n > 64 {
            return Err(Error::Config(alloc::format!(
                "to_mask needs n <= 64, got {}",
                self.n
            )));
        }
        Ok(*self.words.first().unwrap_or(&0))
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<BitString> {
        if n > 64 {
            return Err(Error::Config(alloc::format!(
                "from_mask needs n <= 64, got {n}"
            )));
        }
        if n < 64 && mask >> n != 0 {
            return Err(Error::Config(alloc::format!(
                "mask {mask:#x} has bits above position {n}"
            )));
        }
        let words = if n == 0 { vec![] } else { vec![mask] };
        Ok(BitString { n, words })
    }

    /// Big-endian hex (bit 1 most significant), `ceil(n/4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.n.div_ceil(4);
        let mut out = String::with_capacity(digits);
        let pad = digits * 4 - self.n;
        let mut nibble = 0u8;
        let mut filled = pad;
        for pos in 1..=self.n {
            nibble = (nibble << 1) | self.bit(pos).unwrap() as u8;
            filled += 1;
            if filled == 4 {
                out.push(char::from_digit(nibble as u32, 16).unwrap());
                nibble = 0;
                filled = 0;
            }
        }
        out
    }

    pub fn from_hex(n: usize, s: &str) -> Result<BitString> {
        let digits = n.div_ceil(4);
        if s.len() != digits {
            return Err(Error::Parse(alloc::format!(
                "expected {digits} hex digits for n={n}, got {:?}",
                s
            )));
        }
        let pad = digits * 4 - n;
        let mut out = BitString::zeros(n);
        let mut bit_index = 0usize; // counts bits including the pad
        for ch in s.chars() {
            let d = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(alloc::format!("bad hex digit {ch:?}")))? as u8;
            for k in (0..4).rev() {
                let b = d >> k & 1 == 1;
                if bit_index < pad {
                    if b {
                        return Err(Error::Parse(alloc::format!(
                            "value {s:?} does not fit in {n} bits"
                        )));
                    }
                } else if b {
                    out.set_bit(bit_index - pad + 1, true)?;
                }
                bit_index += 1;
            }
        }
        Ok(out)
    }

    fn check_len(&self, other: &BitString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

impl core::fmt::Debug for BitString {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "BitString(n={}, 0x{})", self.n, self.to_hex())
    }
}

impl core::fmt::Display for BitString {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// A general position map `tau`: the output holds input position `i` at
/// position `tau(i)`. Only used where a non-cyclic rearrangement is
/// needed; all protocol operations go through [`ShiftIndex`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// `map[i-1]` is the image of position i; must be a bijection on 1..=n.
    pub fn new(map: Vec<usize>) -> Result<Permutation> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::BadPermutation { n });
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { map })
    }

    pub fn cyclic(i: ShiftIndex, n: usize) -> Result<Permutation> {
        i.validate(n)?;
        Ok(Permutation {
            map: (1..=n).map(|p| i.position_image(p, n)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, x: &BitString) -> Result<BitString> {
        if x.len() != self.map.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: self.map.len(),
            });
        }
        let mut out = BitString::zeros(x.len());
        for (i0, &image) in self.map.iter().enumerate() {
            if x.bit(i0 + 1)? {
                out.set_bit(image, true)?;
            }
        }
        Ok(out)
    }
}
