//! Numeric verifiers for the entropy and Fourier inequalities behind the
//! lower bound.
//!
//! Each verifier evaluates one inequality `lhs <= rhs` exactly (up to
//! f64 roundoff) on a concrete object and returns a [`VerifierReport`].
//! A report *holds* when `rhs - lhs >= -1e-9`; the quantities involved
//! are O(n) at the sizes we enumerate, far above roundoff, so an absolute
//! slack tolerance is appropriate.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

use super::binomial;
use super::dist::{compress_bits, DenseDistribution};
use super::fourier;

/// Absolute slack tolerance below which an inequality counts as violated.
pub const SLACK_TOL: f64 = 1e-9;

/// Outcome of one inequality evaluation: the claim is `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifierReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub params: BTreeMap<String, f64>,
}

impl VerifierReport {
    pub fn new(name: &str, lhs: f64, rhs: f64, params: BTreeMap<String, f64>) -> VerifierReport {
        let slack = rhs - lhs;
        VerifierReport {
            name: String::from(name),
            lhs,
            rhs,
            slack,
            holds: slack >= -SLACK_TOL,
            params,
        }
    }
}

fn params<const N: usize>(kv: [(&str, f64); N]) -> BTreeMap<String, f64> {
    kv.iter().map(|(k, v)| (String::from(*k), *v)).collect()
}

/// Weak chain rule for min-entropy, with its strong tail bound.
///
/// Splitting the m bits of `nu` into `X1` (the low `m1` positions) and
/// `X2` (the rest), the two reports check
///
/// 1. `H_min(nu) - H(X1) <= E_{Y1}[H_min(X2 | X1 = Y1)]`,
/// 2. `Pr_{Y1}[H_min(X2 | X1 = Y1) <= H_min(nu) - log2|A| - delta] <=
///    2^-delta`,
///
/// where `|A|` is the support size of `X1` and the expectation and
/// probability weight `Y1` by its marginal.
pub fn verify_minentropy_chain(
    nu: &DenseDistribution,
    m1: u32,
    delta: f64,
) -> Result<(VerifierReport, VerifierReport)> {
    let m = nu.m();
    if m1 == 0 || m1 >= m {
        return Err(Error::Config(format!("split m1={m1} outside 1..{m}")));
    }
    if delta < 0.0 {
        return Err(Error::Config(format!("delta {delta} must be >= 0")));
    }
    let mask1 = (1u32 << m1) - 1;
    let size1 = 1usize << m1;

    let mut marg1 = alloc::vec![0.0f64; size1];
    let mut max_cond = alloc::vec![0.0f64; size1];
    for (x, &v) in nu.probs().iter().enumerate() {
        let x1 = x & mask1 as usize;
        marg1[x1] += v;
        // max over x2 of the joint p(x1, x2); normalized by marg1 below
        if v > max_cond[x1] {
            max_cond[x1] = v;
        }
    }

    let hmin_nu = nu.min_entropy();
    let h1: f64 = -marg1
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * math::log2(v))
        .sum::<f64>();
    let support: usize = marg1.iter().filter(|&&v| v > 0.0).count();
    let log_support = math::log2(support as f64);

    let mut expectation = 0.0;
    let mut tail_mass = 0.0;
    let threshold = hmin_nu - log_support - delta;
    for (x1, &w) in marg1.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        let hmin_cond = -math::log2(max_cond[x1] / w);
        expectation += w * hmin_cond;
        if hmin_cond <= threshold + 1e-12 {
            tail_mass += w;
        }
    }

    let ctx = params([
        ("m", m as f64),
        ("m1", m1 as f64),
        ("delta", delta),
        ("support", support as f64),
    ]);
    let expectation_report = VerifierReport::new(
        "minentropy-chain-expectation",
        hmin_nu - h1,
        expectation,
        ctx.clone(),
    );
    let tail_report = VerifierReport::new(
        "minentropy-chain-tail",
        tail_mass,
        math::pow(2.0, -delta),
        ctx,
    );
    Ok((expectation_report, tail_report))
}

/// L1 distance against entropy deficit:
/// `(sum_x |nu1 - nu2|)^2 <= 8 ln2 * (m - min(H(nu1), H(nu2)))`.
///
/// The L1 norm here is the plain sum of absolute differences (twice the
/// total variation distance), not the expectation norm the function-side
/// verifiers use.
pub fn verify_l1_entropy(nu1: &DenseDistribution, nu2: &DenseDistribution) -> Result<VerifierReport> {
    if nu1.m() != nu2.m() {
        return Err(Error::LengthMismatch {
            left: nu1.m() as usize,
            right: nu2.m() as usize,
        });
    }
    let l1: f64 = nu1
        .probs()
        .iter()
        .zip(nu2.probs())
        .map(|(a, b)| math::abs(a - b))
        .sum();
    let min_h = nu1.entropy().min(nu2.entropy());
    let deficit = (nu1.m() as f64 - min_h).max(0.0);
    Ok(VerifierReport::new(
        "l1-entropy",
        l1 * l1,
        8.0 * math::ln(2.0) * deficit,
        params([("m", nu1.m() as f64), ("min_entropy_of_pair", min_h)]),
    ))
}

/// Hypercontractive inequality for `1 <= p <= q`: damping level `|s|` by
/// `((p-1)/(q-1))^(|s|/2)` keeps the q-norm below the p-norm.
pub fn verify_hypercontractive(f: &[f64], m: u32, p: f64, q: f64) -> Result<VerifierReport> {
    if !(1.0 <= p && p <= q) {
        return Err(Error::Config(format!("need 1 <= p <= q, got p={p} q={q}")));
    }
    let sp = fourier::spectrum(f, m)?;
    let rho = math::sqrt((p - 1.0) / (q - 1.0));
    let damped: Vec<f64> = sp
        .coeffs()
        .iter()
        .enumerate()
        .map(|(s, &c)| c * math::powi(rho, (s as u32).count_ones()))
        .collect();
    let mut g = damped;
    fourier::butterfly(&mut g);
    Ok(VerifierReport::new(
        "hypercontractivity",
        fourier::p_norm(&g, q),
        fourier::p_norm(f, p),
        params([("m", m as f64), ("p", p), ("q", q)]),
    ))
}

/// The two tail bounds on Fourier weight derived from
/// hypercontractivity, in terms of `alpha = max|f|` and `beta = E|f|`:
///
/// 1. `sum_s delta^|s| coeff(s)^2 <= alpha^2 (beta/alpha)^(2/(1+delta))`,
/// 2. for `t <= 2 ln(alpha/beta)`:
///    `sum_{|s|<=t} coeff(s)^2 <= beta^2 (2e ln(alpha/beta) / t)^t`.
///
/// The second report is `None` (skipped, not violated) when `t` is out
/// of range.
pub fn verify_kkl(
    f: &[f64],
    m: u32,
    delta: f64,
    t: u32,
) -> Result<(VerifierReport, Option<VerifierReport>)> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Config(format!("delta {delta} outside [0,1]")));
    }
    let alpha = fourier::sup_norm(f);
    if alpha == 0.0 {
        return Err(Error::Config(String::from("f must not be identically 0")));
    }
    let beta = fourier::one_norm(f);
    let sp = fourier::spectrum(f, m)?;

    let damped_weight: f64 = sp
        .coeffs()
        .iter()
        .enumerate()
        .map(|(s, &c)| math::powi(delta, (s as u32).count_ones()) * c * c)
        .sum();
    let first = VerifierReport::new(
        "kkl-damped-weight",
        damped_weight,
        alpha * alpha * math::pow(beta / alpha, 2.0 / (1.0 + delta)),
        params([("m", m as f64), ("delta", delta), ("alpha", alpha), ("beta", beta)]),
    );

    let log_ratio = math::ln(alpha / beta);
    let second = if t >= 1 && (t as f64) <= 2.0 * log_ratio {
        Some(VerifierReport::new(
            "kkl-low-degree",
            sp.low_degree_weight(t),
            beta * beta
                * math::pow(
                    2.0 * core::f64::consts::E * log_ratio / t as f64,
                    t as f64,
                ),
            params([("m", m as f64), ("t", t as f64), ("alpha", alpha), ("beta", beta)]),
        ))
    } else {
        None
    };
    Ok((first, second))
}

/// Outcome of the noisy-projection check.
#[derive(Clone, Debug)]
pub struct NoisyProjectionOutcome {
    pub report: VerifierReport,
    /// Exact entropy deficit of the quarter-noised distribution.
    pub delta: f64,
}

/// Entropy of random projections of a noise-resistant distribution.
///
/// With `delta = n - H(T_{1/4}(nu))` and `k = ceil(2n/3)`, the exact
/// inequality behind the projection lemma is
///
/// `(E_{|S|=k}[H(X_S)] + n - k) * Pr[|W| <= k] <= n - delta`,
///
/// where `S` is a uniform size-k subset of positions, `W` is a uniform
/// random subset (binomial size), and the binomial tail is exact. The
/// subset average enumerates all `C(n, k)` subsets.
pub fn verify_noisy_projection(nu: &DenseDistribution) -> Result<NoisyProjectionOutcome> {
    let n = nu.m();
    if n > 14 {
        return Err(Error::SizeCap { m: n, cap: 14 });
    }
    if n < 2 {
        return Err(Error::Config(String::from("need n >= 2")));
    }
    let k = (2 * n).div_ceil(3);
    let noisy = fourier::apply_noise(nu, 0.25)?;
    let delta = n as f64 - noisy.entropy();

    let mut total = 0.0f64;
    let mut count = 0usize;
    // Gosper's hack over all size-k masks of n bits
    let mut s = (1u32 << k) - 1;
    let limit = 1u32 << n;
    while s < limit {
        total += nu.marginal(s)?.entropy();
        count += 1;
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    let mean_subset_entropy = total / count as f64;

    let tail_above = binomial::ratio_to_f64(&binomial::binomial_prob_range(
        n as u64,
        k as u64 + 1,
        n as u64,
        1,
        2,
    ));
    let lhs = (mean_subset_entropy + n as f64 - k as f64) * (1.0 - tail_above);
    let report = VerifierReport::new(
        "noisy-projection",
        lhs,
        n as f64 - delta,
        params([
            ("n", n as f64),
            ("k", k as f64),
            ("delta", delta),
            ("mean_subset_entropy", mean_subset_entropy),
            ("tail_above", tail_above),
        ]),
    );
    Ok(NoisyProjectionOutcome { report, delta })
}

/// Outcome of the pairwise-XOR entropy check.
#[derive(Clone, Debug)]
pub struct PairwiseXorOutcome {
    pub report: VerifierReport,
    /// Largest deviation in the identity `|Pr[X_j1 = X_j2] - 1/2| =
    /// 2^(n-1) |coeff({j1,j2})|` across pairs.
    pub identity_error: f64,
}

/// Average pairwise-XOR entropy deficit against squared min-entropy
/// deficit: `E_{j1 != j2}[1 - H(X_j1 ^ X_j2)] <= 45/n^2 (n - H_min)^2`.
///
/// Also cross-checks, pair by pair, the equality between the direct
/// correlation `|Pr[X_j1 = X_j2] - 1/2|` and the degree-2 Fourier
/// coefficient of the density (two independent computation routes).
pub fn verify_pairwise_xor(rho: &DenseDistribution) -> Result<PairwiseXorOutcome> {
    let n = rho.m();
    if n < 2 {
        return Err(Error::Config(String::from("need n >= 2")));
    }
    let sp = fourier::spectrum(rho.probs(), n)?;
    let half_support = math::powi(2.0, n - 1);

    let mut deficit_sum = 0.0f64;
    let mut identity_error = 0.0f64;
    let mut pairs = 0usize;
    for j1 in 0..n {
        for j2 in (j1 + 1)..n {
            let mut p_eq = 0.0f64;
            for (x, &v) in rho.probs().iter().enumerate() {
                if (x >> j1) & 1 == (x >> j2) & 1 {
                    p_eq += v;
                }
            }
            deficit_sum += 1.0 - math::binary_entropy(p_eq);
            let direct = math::abs(p_eq - 0.5);
            let via_fourier = half_support * math::abs(sp.coeff(1 << j1 | 1 << j2));
            identity_error = identity_error.max(math::abs(direct - via_fourier));
            pairs += 1;
        }
    }
    let lhs = deficit_sum / pairs as f64;
    let deficit = (n as f64 - rho.min_entropy()).max(0.0);
    let report = VerifierReport::new(
        "pairwise-xor",
        lhs,
        45.0 / (n as f64 * n as f64) * deficit * deficit,
        params([("n", n as f64), ("min_entropy", rho.min_entropy())]),
    );
    Ok(PairwiseXorOutcome {
        report,
        identity_error,
    })
}

/// Conditional pairwise-XOR deficit over a set of positions:
/// `E_{j1 != j2 in I}[1 - H(Y_j1 ^ Y_j2 | Y_outside)]`, exact.
pub fn pairwise_xor_deficit(rho: &DenseDistribution, i_mask: u32) -> Result<f64> {
    let m = rho.m();
    if m > 20 {
        return Err(Error::SizeCap { m, cap: 20 });
    }
    if i_mask >> m != 0 {
        return Err(Error::BadDistribution(format!(
            "position mask {i_mask:#x} exceeds m={m}"
        )));
    }
    let inside: Vec<u32> = (0..m).filter(|j| i_mask >> j & 1 == 1).collect();
    if inside.len() < 2 {
        return Err(Error::Config(format!(
            "need at least two positions inside, got {}",
            inside.len()
        )));
    }
    let outside_mask = !i_mask & ((1u32 << m) - 1);
    let n_out = outside_mask.count_ones();

    let mut total = 0.0f64;
    let mut pairs = 0usize;
    for (a, &j1) in inside.iter().enumerate() {
        for &j2 in &inside[a + 1..] {
            // mass[w][b]: outside pattern w, xor bit b
            let mut mass = alloc::vec![[0.0f64; 2]; 1usize << n_out];
            for (x, &v) in rho.probs().iter().enumerate() {
                let w = compress_bits(x, outside_mask);
                let b = ((x >> j1) ^ (x >> j2)) & 1;
                mass[w][b] += v;
            }
            let mut cond_entropy = 0.0f64;
            for cell in mass {
                let w_mass = cell[0] + cell[1];
                if w_mass > 0.0 {
                    cond_entropy += w_mass * math::binary_entropy(cell[0] / w_mass);
                }
            }
            total += 1.0 - cond_entropy;
            pairs += 1;
        }
    }
    Ok(total / pairs as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::dist::DenseDistribution;
    use crate::rng;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn minentropy_chain_tight_on_product_uniform() {
        // uniform on A x B with |A| = 4 (m1=2), |B| = 8
        let nu = DenseDistribution::uniform(5).unwrap();
        let (exp, tail) = verify_minentropy_chain(&nu, 2, 0.0).unwrap();
        assert!(exp.holds);
        assert!((exp.lhs - 3.0).abs() < 1e-12);
        assert!((exp.rhs - 3.0).abs() < 1e-12);
        assert!(tail.holds);
        assert!(tail.rhs == 1.0);
    }

    #[test]
    fn minentropy_chain_point_mass() {
        let nu = DenseDistribution::point_mass(4, 7).unwrap();
        let (exp, tail) = verify_minentropy_chain(&nu, 2, 1.0).unwrap();
        assert!(exp.holds && tail.holds);
        assert_eq!(exp.lhs, 0.0);
        assert_eq!(exp.rhs, 0.0);
    }

    #[test]
    fn minentropy_chain_random_sweep() {
        let mut rng = rng::master(40);
        for trial in 0..500u32 {
            let m = 2 + (trial % 7);
            let nu = if trial % 3 == 0 {
                DenseDistribution::random_sparse(m, (1usize << m) / 2 + 1, &mut rng).unwrap()
            } else {
                DenseDistribution::random_dense(m, &mut rng).unwrap()
            };
            let m1 = 1 + (trial % (m - 1));
            for delta in [0.0, 1.0, 2.0, 4.0] {
                let (exp, tail) = verify_minentropy_chain(&nu, m1, delta).unwrap();
                assert!(exp.holds, "expectation violated: {exp:?}");
                assert!(tail.holds, "tail violated: {tail:?}");
            }
        }
    }

    #[test]
    fn l1_entropy_examples() {
        let u = DenseDistribution::uniform(4).unwrap();
        let same = verify_l1_entropy(&u, &u).unwrap();
        assert_eq!(same.lhs, 0.0);
        assert!(same.holds);

        let point = DenseDistribution::point_mass(4, 3).unwrap();
        let rep = verify_l1_entropy(&u, &point).unwrap();
        // L1 = 2 - 2/16, squared = 3.515625; bound = 8 ln2 * 4
        assert!((rep.lhs - 3.515625).abs() < 1e-12);
        assert!((rep.rhs - 8.0 * math::ln(2.0) * 4.0).abs() < 1e-12);
        assert!(rep.holds);
    }

    #[test]
    fn hypercontractivity_on_characters() {
        let m = 6u32;
        let s0 = 0b101u32;
        let f: Vec<f64> = (0..1usize << m)
            .map(|x| if (x as u32 & s0).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let rep = verify_hypercontractive(&f, m, 1.5, 3.0).unwrap();
        // lhs = ((p-1)/(q-1))^(|s0|/2) = (1/4)^1, rhs = 1
        assert!((rep.lhs - 0.25).abs() < 1e-12);
        assert!((rep.rhs - 1.0).abs() < 1e-12);
        assert!(rep.holds);

        let c = vec![2.5; 1 << m];
        let rep = verify_hypercontractive(&c, m, 1.0, 2.0).unwrap();
        assert!((rep.lhs - 2.5).abs() < 1e-12);
        assert!((rep.rhs - 2.5).abs() < 1e-12);
        assert!(rep.holds);
    }

    #[test]
    fn kkl_delta_zero_is_mean_bound() {
        let mut rng = rng::master(41);
        let m = 6u32;
        let f: Vec<f64> = (0..1usize << m)
            .map(|_| if rng::bernoulli(&mut rng, 0.5) { 1.0 } else { -1.0 })
            .collect();
        let (first, _) = verify_kkl(&f, m, 0.0, 2).unwrap();
        // sum delta^|s| fhat^2 = fhat(0)^2 = (E f)^2 <= (E|f|)^2 = 1
        let mean = f.iter().sum::<f64>() / f.len() as f64;
        assert!((first.lhs - mean * mean).abs() < 1e-12);
        assert!((first.rhs - 1.0).abs() < 1e-12);
        assert!(first.holds);
    }

    #[test]
    fn kkl_subcube_indicator() {
        // +-1 indicator of a codimension-2 subcube, m = 8
        let m = 8u32;
        let f: Vec<f64> = (0..1usize << m)
            .map(|x| if x & 0b11 == 0 { 1.0 } else { 0.0 })
            .collect();
        let (first, second) = verify_kkl(&f, m, 0.5, 2).unwrap();
        assert!(first.holds, "{first:?}");
        // beta = 1/4, alpha = 1, so t=2 <= 2 ln 4 applies
        let second = second.expect("t=2 within range");
        assert!(second.holds, "{second:?}");
        assert!(second.slack >= 0.0);
    }

    #[test]
    fn kkl_skips_out_of_range_t() {
        let f = vec![1.0; 16];
        let (_, second) = verify_kkl(&f, 4, 0.5, 2).unwrap();
        assert!(second.is_none());
        assert!(verify_kkl(&[0.0; 16], 4, 0.5, 2).is_err());
    }

    #[test]
    fn noisy_projection_uniform_is_tight_sideways() {
        let nu = DenseDistribution::uniform(6).unwrap();
        let out = verify_noisy_projection(&nu).unwrap();
        assert!(out.delta.abs() < 1e-9);
        assert!(out.report.holds);
        // subset entropies are full, so the two sides differ exactly by
        // the binomial tail factor: lhs = n * (1 - tail), rhs = n
        let tail = out.report.params["tail_above"];
        assert!((out.report.lhs - 6.0 * (1.0 - tail)).abs() < 1e-9);
        assert!((out.report.rhs - 6.0).abs() < 1e-9);
    }

    #[test]
    fn noisy_projection_even_parity() {
        let nu = DenseDistribution::even_parity_uniform(8).unwrap();
        let out = verify_noisy_projection(&nu).unwrap();
        // the noisy parity bit keeps only a 2^-n-scale bias
        assert!(out.delta > 0.0 && out.delta < 1.0 / 256.0, "delta = {}", out.delta);
        assert!(out.report.holds);
    }

    #[test]
    fn pairwise_xor_extremes() {
        let u = DenseDistribution::uniform(5).unwrap();
        let out = verify_pairwise_xor(&u).unwrap();
        assert!(out.report.lhs.abs() < 1e-12);
        assert!(out.report.rhs.abs() < 1e-9);
        assert!(out.report.holds);
        assert!(out.identity_error < 1e-12);

        let point = DenseDistribution::point_mass(5, 0b10110).unwrap();
        let out = verify_pairwise_xor(&point).unwrap();
        assert!((out.report.lhs - 1.0).abs() < 1e-12);
        assert!((out.report.rhs - 45.0).abs() < 1e-9);
        assert!(out.report.holds);
    }

    #[test]
    fn pairwise_deficit_conditional_examples() {
        let u = DenseDistribution::uniform(6).unwrap();
        assert!(pairwise_xor_deficit(&u, 0b111).unwrap().abs() < 1e-12);

        let point = DenseDistribution::point_mass(6, 0b101010).unwrap();
        assert!((pairwise_xor_deficit(&point, 0b111).unwrap() - 1.0).abs() < 1e-12);

        // even-parity uniform, conditioning on nothing: pairwise XORs are
        // uniform for n >= 3, so the deficit vanishes
        let parity = DenseDistribution::even_parity_uniform(5).unwrap();
        assert!(pairwise_xor_deficit(&parity, 0b11111).unwrap().abs() < 1e-12);
        // but conditioning on the other positions pins the XOR exactly
        let d = pairwise_xor_deficit(&parity, 0b00011).unwrap();
        assert!((d - 1.0).abs() < 1e-12);

        assert!(pairwise_xor_deficit(&u, 0b1).is_err());
    }
}
