//! Exact binomial arithmetic over big rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Binomial coefficient C(n, k), exact.
pub fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::from(1u32);
    for j in 1..=k {
        c = c * BigInt::from(n - k + j) / BigInt::from(j);
    }
    c
}

/// Pr[X = k] for X ~ Binomial(n, a/b), exact.
pub fn binomial_pmf(n: u64, k: u64, p_num: u64, p_den: u64) -> BigRational {
    assert!(p_num <= p_den && p_den > 0, "probability must be in [0,1]");
    if k > n {
        return BigRational::zero();
    }
    let a = BigInt::from(p_num);
    let c = BigInt::from(p_den - p_num);
    let numer = binom(n, k) * a.pow(k as u32) * c.pow((n - k) as u32);
    BigRational::new(numer, BigInt::from(p_den).pow(n as u32))
}

/// Pr[X <= k] for X ~ Binomial(n, a/b), exact.
pub fn binomial_cdf_le(n: u64, k: u64, p_num: u64, p_den: u64) -> BigRational {
    assert!(p_num <= p_den && p_den > 0, "probability must be in [0,1]");
    let a = BigInt::from(p_num);
    let c = BigInt::from(p_den - p_num);
    let mut numer = BigInt::zero();
    let mut coeff = BigInt::from(1u32); // C(n, j), updated incrementally
    for j in 0..=k.min(n) {
        if j > 0 {
            coeff = coeff * BigInt::from(n - j + 1) / BigInt::from(j);
        }
        numer += &coeff * a.pow(j as u32) * c.pow((n - j) as u32);
    }
    BigRational::new(numer, BigInt::from(p_den).pow(n as u32))
}

/// Pr[lo <= X <= hi], exact.
pub fn binomial_prob_range(n: u64, lo: u64, hi: u64, p_num: u64, p_den: u64) -> BigRational {
    if lo > hi {
        return BigRational::zero();
    }
    let upper = binomial_cdf_le(n, hi, p_num, p_den);
    if lo == 0 {
        upper
    } else {
        upper - binomial_cdf_le(n, lo - 1, p_num, p_den)
    }
}

/// Rational to f64 without overflowing intermediate conversions: scales
/// the quotient to ~64 significant bits, then rescales by a power of two.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer();
    let den = r.denom();
    let shift: i64 = den.bits() as i64 - num.bits() as i64 + 64;
    let scaled = if shift >= 0 {
        num << shift as usize
    } else {
        num >> (-shift) as usize
    };
    let q = (scaled / den).to_f64().unwrap_or(f64::NAN);
    libm::scalbn(q, -shift as i32)
}
