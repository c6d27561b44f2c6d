//! Randomized verification suites over the inequality checkers.
//!
//! Each suite draws its objects from per-trial seeded streams, so a
//! fixed seed reproduces every report bit for bit. A suite passes when
//! every generated report holds; skips (bounds whose side condition
//! fails, e.g. the low-degree tail with t out of range) are counted
//! separately and are not violations.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::rng;

use super::dist::DenseDistribution;
use super::fourier;
use super::rect;
use super::verify::{self, VerifierReport};

#[derive(Clone, Debug)]
pub struct SuiteParams {
    pub seed: u64,
    pub trials: usize,
    /// Upper bound on distribution sizes in bits; each suite clamps to
    /// its own natural size below this.
    pub size_cap: u32,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            seed: 0,
            trials: 1000,
            size_cap: super::dist::MAX_BITS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: String,
    pub reports: Vec<VerifierReport>,
    pub skipped: usize,
}

impl SuiteResult {
    pub fn violations(&self) -> usize {
        self.reports.iter().filter(|r| !r.holds).count()
    }

    pub fn all_hold(&self) -> bool {
        self.violations() == 0
    }

    pub fn worst_slack(&self) -> f64 {
        self.reports
            .iter()
            .map(|r| r.slack)
            .fold(f64::INFINITY, f64::min)
    }
}

/// All suite names, in the order `run_all` executes them.
pub const SUITE_NAMES: [&str; 8] = [
    "minentropy-chain",
    "l1-entropy",
    "hypercontractivity",
    "kkl",
    "pairwise-xor",
    "noisy-projection",
    "noise-algebra",
    "parity-counterexample",
];

/// Run one suite by name.
pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteResult> {
    match name {
        "minentropy-chain" => minentropy_chain_suite(params),
        "l1-entropy" => l1_entropy_suite(params),
        "hypercontractivity" => hypercontractivity_suite(params),
        "kkl" => kkl_suite(params),
        "pairwise-xor" => pairwise_xor_suite(params),
        "noisy-projection" => noisy_projection_suite(params),
        "noise-algebra" => noise_algebra_suite(params),
        "parity-counterexample" => parity_counterexample_suite(params),
        other => Err(Error::Config(alloc::format!("unknown suite {other:?}"))),
    }
}

/// Run every suite.
pub fn run_all(params: &SuiteParams) -> Result<Vec<SuiteResult>> {
    SUITE_NAMES.iter().map(|n| run_suite(n, params)).collect()
}

fn random_distribution<R: rand_core::RngCore>(m: u32, rng: &mut R) -> Result<DenseDistribution> {
    // alternate smooth and spiky spectra
    if rng::bernoulli(rng, 0.5) {
        DenseDistribution::random_dense(m, rng)
    } else {
        let size = 1usize << m;
        let support = 1 + rng::uniform_index(rng, size);
        DenseDistribution::random_sparse(m, support, rng)
    }
}

/// Random sign function on a random support: values in {-1, 0, +1},
/// not identically zero.
pub fn random_sign_function<R: rand_core::RngCore>(m: u32, rng: &mut R) -> Vec<f64> {
    let size = 1usize << m;
    loop {
        let density = 0.1 + 0.9 * rng::uniform_f64(rng);
        let f: Vec<f64> = (0..size)
            .map(|_| {
                if rng::bernoulli(rng, density) {
                    if rng::bernoulli(rng, 0.5) {
                        1.0
                    } else {
                        -1.0
                    }
                } else {
                    0.0
                }
            })
            .collect();
        if f.iter().any(|&v| v != 0.0) {
            return f;
        }
    }
}

/// Min-entropy chain rule on random bipartite distributions,
/// tail offsets 0, 1, 2 and 4.
pub fn minentropy_chain_suite(params: &SuiteParams) -> Result<SuiteResult> {
    let m_max = params.size_cap.clamp(2, 10);
    let mut reports = Vec::new();
    for trial in 0..params.trials {
        let mut rng = rng::for_trial(params.seed, trial as u64);
        let m = 2 + rng::uniform_index(&mut rng, (m_max - 1) as usize) as u32;
        let m1 = 1 + rng::uniform_index(&mut rng, (m - 1) as usize) as u32;
        let nu = random_distribution(m, &mut rng)?;
        for delta in [0.0, 1.0, 2.0, 4.0] {
            let (exp, tail) = verify::verify_minentropy_chain(&nu, m1, delta)?;
            reports.push(exp);
            reports.push(tail);
        }
    }
    Ok(SuiteResult {
        name: String::from("minentropy-chain"),
        reports,
        skipped: 0,
    })
}

/// L1-vs-entropy bound on random pairs.
pub fn l1_entropy_suite(params: &SuiteParams) -> Result<SuiteResult> {
    let m_max = params.size_cap.clamp(1, 10);
    let mut reports = Vec::new();
    for trial in 0..params.trials {
        let mut rng = rng::for_trial(params.seed ^ 0x11d7, trial as u64);
        let m = 1 + rng::uniform_index(&mut rng, m_max as usize) as u32;
        let nu1 = random_distribution(m, &mut rng)?;
        let nu2 = random_distribution(m, &mut rng)?;
        reports.push(verify::verify_l1_entropy(&nu1, &nu2)?);
    }
    Ok(SuiteResult {
        name: String::from("l1-entropy"),
        reports,
        skipped: 0,
    })
}

/// Hypercontractivity over a (p, q) grid on random functions at m = 8.
pub fn hypercontractivity_suite(params: &SuiteParams) -> Result<SuiteResult> {
    let m = params.size_cap.min(8);
    let size = 1usize << m;
    let mut reports = Vec::new();
    for trial in 0..params.trials {
        let mut rng = rng::for_trial(params.seed ^ 0xb0b0, trial as u64);
        let f: Vec<f64> = (0..size)
            .map(|_| 2.0 * rng::uniform_f64(&mut rng) - 1.0)
            .collect();
        for p in [1.0, 1.5, 2.0] {
            for q in [2.0, 3.0, 4.0] {
                reports.push(verify::verify_hypercontractive(&f, m, p, q)?);
            }
        }
    }
    Ok(SuiteResult {
        name: String::from("hypercontractivity"),
        reports,
        skipped: 0,
    })
}

/// Damped-weight and low-degree tail bounds on random sign functions,
/// t = 2.
pub fn kkl_suite(params: &SuiteParams) -> Result<SuiteResult> {
    let m = params.size_cap.min(10);
    let mut reports = Vec::new();
    let mut skipped = 0usize;
    for trial in 0..params.trials {
        let mut rng = rng::for_trial(params.seed ^ 0x5EED, trial as u64);
        let f = random_sign_function(m, &mut rng);
        for delta in [0.0, 0.25, 0.5, 1.0] {
            let (first, second) = verify::verify_kkl(&f, m, delta, 2)?;
            reports.push(first);
            match second {
                Some(rep) => reports.push(rep),
                None => skipped += 1,
            }
        }
    }
    Ok(SuiteResult {
        name: String::from("kkl"),
        reports,
        skipped,
    })
}

/// Pairwise-XOR deficit bound plus the degree-2 coefficient identity,
/// n cycling over 4..=12.
pub fn pairwise_xor_suite(params: &SuiteParams) -> Result<SuiteResult> {
    let n_max = params.size_cap.clamp(4, 12);
    let mut reports = Vec::new();
    for trial in 0..params.trials {
        let mut rng = rng::for_trial(params.seed ^ 0xc0de, trial as u64);
        let n = 4 + (trial as u32 % (n_max - 3));
        let rho = random_distribution(n, &mut rng)?;
        let out = verify::verify_pairwise_xor(&rho)?;
        reports.push(out.report);
        reports.push(VerifierReport::new(
            "pairwise-xor-identity",
            out.identity_error,
            1e-10,
            [(String::from("n"), n as f64)].into_iter().collect(),
        ));
    }
    Ok(SuiteResult {
        name: String::from("pairwise-xor"),
        reports,
        skipped: 0,
    })
}

/// Exact proof inequality for entropy of random projections, n = 9.
pub fn noisy_projection_suite(params: &SuiteParams) -> Result<SuiteResult> {
    let n = params.size_cap.clamp(2, 9);
    let mut reports = Vec::new();
    for trial in 0..params.trials {
        let mut rng = rng::for_trial(params.seed ^ 0xd15c, trial as u64);
        let nu = random_distribution(n, &mut rng)?;
        reports.push(verify::verify_noisy_projection(&nu)?.report);
    }
    Ok(SuiteResult {
        name: String::from("noisy-projection"),
        reports,
        skipped: 0,
    })
}

/// Noise-operator algebra: multiplier route against direct convolution,
/// and the quarter-twice = three-eighths composition.
pub fn noise_algebra_suite(params: &SuiteParams) -> Result<SuiteResult> {
    let m_max = params.size_cap.clamp(1, 10);
    let mut reports = Vec::new();
    for trial in 0..params.trials {
        let mut rng = rng::for_trial(params.seed ^ 0xa15e, trial as u64);
        let m = 1 + rng::uniform_index(&mut rng, m_max as usize) as u32;
        let d = random_distribution(m, &mut rng)?;
        let delta = 0.5 * rng::uniform_f64(&mut rng);

        let multiplier = fourier::apply_noise(&d, delta)?;
        let convolution = fourier::apply_noise_convolution(&d, delta)?;
        let max_err = multiplier
            .probs()
            .iter()
            .zip(convolution.probs())
            .map(|(a, b)| math::abs(a - b))
            .fold(0.0, f64::max);
        reports.push(VerifierReport::new(
            "noise-multiplier-vs-convolution",
            max_err,
            1e-12,
            [(String::from("m"), m as f64), (String::from("delta"), delta)]
                .into_iter()
                .collect(),
        ));

        let twice = fourier::apply_noise(&fourier::apply_noise(&d, 0.25)?, 0.25)?;
        let once = fourier::apply_noise(&d, 0.375)?;
        let comp_err = twice
            .probs()
            .iter()
            .zip(once.probs())
            .map(|(a, b)| math::abs(a - b))
            .fold(0.0, f64::max);
        reports.push(VerifierReport::new(
            "noise-composition",
            comp_err,
            1e-12,
            [(String::from("m"), m as f64)].into_iter().collect(),
        ));
    }
    Ok(SuiteResult {
        name: String::from("noise-algebra"),
        reports,
        skipped: 0,
    })
}

/// The even-parity counterexample: without noise the shift-XOR entropy
/// deficit is exactly 1 at every shift, with quarter-noise it collapses
/// below 2^-n.
pub fn parity_counterexample_suite(params: &SuiteParams) -> Result<SuiteResult> {
    let mut reports = Vec::new();
    for n in [6usize, 8, 10] {
        if 2 * n as u32 > params.size_cap.max(12) {
            continue;
        }
        let set = rect::even_parity_set(2 * n as u32);
        let mut worst_noiseless_err = 0.0f64;
        let mut worst_noisy_deficit = 0.0f64;
        for i in 0..n {
            let z = rect::shift_xor_distribution(&set, n, i)?;
            let noiseless_deficit = n as f64 - z.entropy();
            worst_noiseless_err = worst_noiseless_err.max(math::abs(noiseless_deficit - 1.0));
            let noisy = fourier::apply_noise(&z, 0.25)?;
            worst_noisy_deficit = worst_noisy_deficit.max(n as f64 - noisy.entropy());
        }
        reports.push(VerifierReport::new(
            "parity-noiseless-deficit-one",
            worst_noiseless_err,
            1e-12,
            [(String::from("n"), n as f64)].into_iter().collect(),
        ));
        reports.push(VerifierReport::new(
            "parity-noisy-deficit",
            worst_noisy_deficit,
            math::powi(0.5, n as u32),
            [(String::from("n"), n as f64)].into_iter().collect(),
        ));
    }
    Ok(SuiteResult {
        name: String::from("parity-counterexample"),
        reports,
        skipped: 0,
    })
}
