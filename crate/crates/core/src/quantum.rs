//! Exact amplitude-level simulation of the entangled simultaneous-message
//! protocol.
//!
//! Per repetition, the players share two maximally entangled register
//! pairs and encode their inputs as conditional phase flips. The referee
//! tests shift `i` by conjugating a swap of the two message pairs with a
//! shift on the first pair's registers; in the compressed basis the
//! whole action on one repetition is the involution
//! `W_i |k,j> = |shift_{-i}(j), shift_i(k)>`, the direction chosen so
//! that round `i`'s overlap is exactly `1 - 2 w(i)/n` for `w(i)` the
//! shift-`i` XOR weight.
//!
//! The compressed basis is the point of the module: the state lives in
//! `(C^n ⊗ C^n) ⊗ (C^n ⊗ C^n)` per repetition but is always supported on
//! `span{|k,k>|j,j>}`, and every referee operation preserves that span,
//! so one repetition costs n^2 amplitudes instead of n^4 and the t-fold
//! message state costs n^(2t). The swap-test ancilla is never
//! materialized: the accept/reject statistics and post-measurement
//! states come from the projectors `(I ± W_i)/2`, which is equivalent.
//!
//! A protocol round at shift `i` measures all t repetitions and accepts
//! when at least `ceil(tau * t)` individual tests accept. The referee
//! runs rounds `i = 0..n-1` sequentially on the same message state and
//! answers 1 if any round accepts.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_core::RngCore;

use crate::bits::{BitString, ShiftIndex};
use crate::error::{Error, Result};
use crate::math;
use crate::problem::{PromiseClass, ShapInstance, ShiftClass};
use crate::rng;

/// Allowed drift of a state's squared norm before operations abort.
pub const NORM_TOL: f64 = 1e-9;

/// Probabilities below this are treated as impossible outcomes.
const PROB_FLOOR: f64 = 1e-15;

/// Default cap on the joint-state dimension `n^(2t)`.
pub const DEFAULT_DIM_CAP: usize = 1 << 24;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// ±1 phase vector a player contributes: position k carries
/// `(-1)^(x(k) + y(k))`.
fn sign_vector(x: &BitString, y: &BitString) -> Result<Vec<f64>> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: y.len(),
        });
    }
    (1..=n)
        .map(|pos| {
            Ok(if x.bit(pos)? ^ y.bit(pos)? {
                -1.0
            } else {
                1.0
            })
        })
        .collect()
}

/// One repetition of the referee's state in the compressed basis
/// `|k,j>`, index `k*n + j`.
#[derive(Clone, Debug)]
pub struct PairedState {
    n: usize,
    amp: Vec<Complex64>,
}

impl PairedState {
    /// State after both players' phase encodings:
    /// `amp(k,j) = (1/n) * (-1)^(x1(k)+y1(k)) * (-1)^(x2(j)+y2(j))`.
    pub fn prepare_initial(inst: &ShapInstance) -> Result<PairedState> {
        let n = inst.n();
        let a = sign_vector(inst.x1(), inst.y1())?;
        let b = sign_vector(inst.x2(), inst.y2())?;
        let scale = 1.0 / n as f64;
        let mut amp = Vec::with_capacity(n * n);
        for &ak in &a {
            for &bj in &b {
                amp.push(c(ak * bj * scale));
            }
        }
        Ok(PairedState { n, amp })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn amplitude(&self, k: usize, j: usize) -> Complex64 {
        self.amp[k * self.n + j]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    /// The shift-conjugated swap: `|k,j> -> |shift_{-i}(j), shift_i(k)>`.
    /// Involutive: applying it twice is the identity, bit for bit.
    pub fn shift_swap(&self, i: ShiftIndex) -> Result<PairedState> {
        i.validate(self.n)?;
        let amp = apply_swap_rep(&self.amp, self.n, i, 0);
        Ok(PairedState { n: self.n, amp })
    }

    /// `<state| W_i |state>`; real because `W_i` is a symmetric
    /// permutation.
    pub fn swap_expectation(&self, i: ShiftIndex) -> Result<f64> {
        let swapped = self.shift_swap(i)?;
        let ip: Complex64 = self
            .amp
            .iter()
            .zip(&swapped.amp)
            .map(|(a, b)| a.conj() * b)
            .sum();
        debug_assert!(math::abs(ip.im) < 1e-12);
        Ok(ip.re)
    }
}

/// Accept probability of one swap test at shift `i`:
/// `(1 + <state|W_i|state>) / 2`. On the initial product state this is
/// `(1 + overlap^2) / 2` for the message overlap computed by
/// [`inner_product`].
pub fn swap_accept_prob(state: &PairedState, i: ShiftIndex) -> Result<f64> {
    let norm = state.norm_sqr();
    if math::abs(norm - 1.0) > NORM_TOL {
        return Err(Error::NormDrift { norm_sqr: norm });
    }
    Ok(((1.0 + state.swap_expectation(i)?) / 2.0).clamp(0.0, 1.0))
}

/// Message overlap at shift `i` by direct amplitude summation: the
/// shifted first-pair phases against the second-pair phases,
/// `(1/n) * sum_k a(shift_{-i}(k)) * b(k)`, which term-for-term matches
/// the positions of `shift_i(x1) ^ x2 ^ shift_i(y1) ^ y2`.
pub fn inner_product_amplitude(inst: &ShapInstance, i: ShiftIndex) -> Result<f64> {
    let n = inst.n();
    i.validate(n)?;
    let a = sign_vector(inst.x1(), inst.y1())?;
    let b = sign_vector(inst.x2(), inst.y2())?;
    let inv = i.inverse(n);
    let mut sum = 0.0f64;
    for k0 in 0..n {
        sum += a[inv.index_image0(k0, n)] * b[k0];
    }
    Ok(sum / n as f64)
}

/// Message overlap by the weight identity `1 - 2w/n`.
pub fn inner_product_closed_form(inst: &ShapInstance, i: ShiftIndex) -> Result<f64> {
    let n = inst.n();
    let w = inst.shift_xor_weight(i)?;
    Ok(1.0 - 2.0 * w as f64 / n as f64)
}

/// Message overlap, computed by both routes; errors if they disagree
/// beyond 1e-12.
pub fn inner_product(inst: &ShapInstance, i: ShiftIndex) -> Result<f64> {
    let direct = inner_product_amplitude(inst, i)?;
    let closed = inner_product_closed_form(inst, i)?;
    if math::abs(direct - closed) > 1e-12 {
        return Err(Error::Config(format!(
            "overlap routes disagree: amplitude {direct} vs closed form {closed}"
        )));
    }
    Ok(closed)
}

/// Protocol parameters.
#[derive(Clone, Debug)]
pub struct ProtocolConfig {
    pub n: usize,
    /// Parallel repetitions per round.
    pub t: usize,
    /// Majority acceptance fraction; a round accepts when at least
    /// `ceil(tau * t)` repetitions accept. Default 0.511, the midpoint
    /// of the two per-test accept probabilities `(1 + 1/225)/2` and
    /// `(1 + 1/25)/2` guaranteed by the promise.
    pub tau: f64,
    /// Target overall error; only used for reporting the amplified
    /// per-round error budget `eps^2 / (16 n^4)`.
    pub eps_target: f64,
    /// Order in which the referee measures the shifts.
    pub shift_order: Vec<ShiftIndex>,
    /// Resource cap on the joint dimension `n^(2t)`.
    pub dim_cap: usize,
}

impl ProtocolConfig {
    pub fn new(n: usize, t: usize) -> Result<ProtocolConfig> {
        let cfg = ProtocolConfig {
            n,
            t,
            tau: 0.511,
            eps_target: 0.1,
            shift_order: (0..n).map(ShiftIndex).collect(),
            dim_cap: DEFAULT_DIM_CAP,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tau(mut self, tau: f64) -> Result<ProtocolConfig> {
        self.tau = tau;
        self.validate()?;
        Ok(self)
    }

    pub fn with_eps_target(mut self, eps: f64) -> Result<ProtocolConfig> {
        self.eps_target = eps;
        self.validate()?;
        Ok(self)
    }

    pub fn with_shift_order(mut self, order: Vec<ShiftIndex>) -> Result<ProtocolConfig> {
        self.shift_order = order;
        self.validate()?;
        Ok(self)
    }

    pub fn with_dim_cap(mut self, cap: usize) -> Result<ProtocolConfig> {
        self.dim_cap = cap;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(String::from("need n >= 2")));
        }
        if self.t == 0 {
            return Err(Error::Config(String::from("need t >= 1")));
        }
        if !(self.tau > 0.5 && self.tau < 1.0) {
            return Err(Error::Config(format!("tau {} outside (1/2, 1)", self.tau)));
        }
        if !(self.eps_target > 0.0 && self.eps_target < 1.0) {
            return Err(Error::Config(format!(
                "eps_target {} outside (0, 1)",
                self.eps_target
            )));
        }
        if self.shift_order.is_empty() {
            return Err(Error::Config(String::from("empty shift order")));
        }
        for &i in &self.shift_order {
            i.validate(self.n)?;
        }
        // the dimension cap is a simulation-resource limit, checked when
        // a joint state is actually prepared; cost accounting may use
        // configurations far beyond it
        Ok(())
    }

    /// Joint dimension `n^(2t)`, checked against the cap.
    pub fn dimension(&self) -> Result<usize> {
        let mut dim: u128 = 1;
        let pair = (self.n as u128) * (self.n as u128);
        for _ in 0..self.t {
            dim = dim.saturating_mul(pair);
            if dim > self.dim_cap as u128 {
                return Err(Error::DimensionCap {
                    required: dim,
                    cap: self.dim_cap as u128,
                });
            }
        }
        Ok(dim as usize)
    }

    /// Accept-count threshold `ceil(tau * t)`, with a guard against the
    /// product landing a rounding error above an integer.
    pub fn accept_threshold(&self) -> usize {
        let x = self.tau * self.t as f64;
        let fl = math::floor(x);
        if x - fl < 1e-9 {
            fl as usize
        } else {
            fl as usize + 1
        }
    }

    /// The per-round error the amplified building block would be given
    /// in the cost statement: `eps^2 / (16 n^4)`.
    pub fn eps_prime(&self) -> f64 {
        let n = self.n as f64;
        self.eps_target * self.eps_target / (16.0 * n * n * n * n)
    }
}

/// Communication cost: each player sends t register pairs of
/// `ceil(log2 n)` qubits, all drawn from pre-shared entanglement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CostReport {
    pub qubits_sent: u64,
    pub entanglement_bits: u64,
}

pub fn cost_report(cfg: &ProtocolConfig) -> CostReport {
    let qubits = 4 * cfg.t as u64 * math::ceil_log2(cfg.n) as u64;
    CostReport {
        qubits_sent: qubits,
        entanglement_bits: qubits,
    }
}

/// Outcome label of a round measurement.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Accept,
    Reject,
}

/// The t-repetition message state, dimension `n^(2t)`; repetition `r`
/// occupies the index stride `(n^2)^r`.
#[derive(Clone, Debug)]
pub struct JointState {
    n: usize,
    t: usize,
    amp: Vec<Complex64>,
}

/// `W_i` on repetition `rep` of a joint amplitude vector.
fn apply_swap_rep(amp: &[Complex64], n: usize, i: ShiftIndex, rep: usize) -> Vec<Complex64> {
    let pair = n * n;
    let stride = pair.pow(rep as u32);
    let mut out = vec![c(0.0); amp.len()];
    let inv = i.inverse(n);
    for (g, slot) in out.iter_mut().enumerate() {
        let q = (g / stride) % pair;
        let (k, j) = (q / n, q % n);
        // gather form of |k,j> -> |shift_{-i}(j), shift_i(k)>
        let src_q = inv.index_image0(j, n) * n + i.index_image0(k, n);
        *slot = amp[g + src_q * stride - q * stride];
    }
    out
}

impl JointState {
    /// Tensor power of the per-repetition initial state.
    pub fn prepare(inst: &ShapInstance, cfg: &ProtocolConfig) -> Result<JointState> {
        if inst.n() != cfg.n {
            return Err(Error::LengthMismatch {
                left: inst.n(),
                right: cfg.n,
            });
        }
        let dim = cfg.dimension()?;
        let pair = PairedState::prepare_initial(inst)?;
        let mut amp = vec![c(1.0)];
        for _ in 0..cfg.t {
            let mut next = Vec::with_capacity(amp.len() * pair.amp.len());
            for &p in &pair.amp {
                for &a in &amp {
                    next.push(p * a);
                }
            }
            amp = next;
        }
        debug_assert_eq!(amp.len(), dim);
        Ok(JointState {
            n: cfg.n,
            t: cfg.t,
            amp,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Splits the state by the number of accepting repetitions at shift
    /// `i`: layer `c` is the (unnormalized) projection onto outcome
    /// patterns with exactly `c` accepts. Layers are mutually
    /// orthogonal and sum to the state.
    fn split_by_accept_count(&self, i: ShiftIndex) -> Vec<Vec<Complex64>> {
        let dim = self.amp.len();
        let mut layers = vec![self.amp.clone()];
        for rep in 0..self.t {
            let mut next = vec![vec![c(0.0); dim]; layers.len() + 1];
            for (count, layer) in layers.iter().enumerate() {
                let swapped = apply_swap_rep(layer, self.n, i, rep);
                for g in 0..dim {
                    let plus = (layer[g] + swapped[g]) * 0.5;
                    let minus = (layer[g] - swapped[g]) * 0.5;
                    next[count + 1][g] += plus;
                    next[count][g] += minus;
                }
            }
            layers = next;
        }
        layers
    }

    /// Probability of the given outcome at shift `i` and the renormalized
    /// post-measurement state (`None` when the outcome has vanishing
    /// probability).
    pub fn project(
        &self,
        i: ShiftIndex,
        cfg: &ProtocolConfig,
        outcome: Outcome,
    ) -> Result<(f64, Option<JointState>)> {
        let (p_accept, accept, reject) = self.split(i, cfg)?;
        let (p, vec) = match outcome {
            Outcome::Accept => (p_accept, accept),
            Outcome::Reject => (1.0 - p_accept, reject),
        };
        if p < PROB_FLOOR {
            return Ok((p, None));
        }
        let scale = 1.0 / math::sqrt(p);
        let amp = vec.into_iter().map(|a| a * scale).collect();
        Ok((
            p,
            Some(JointState {
                n: self.n,
                t: self.t,
                amp,
            }),
        ))
    }

    fn split(
        &self,
        i: ShiftIndex,
        cfg: &ProtocolConfig,
    ) -> Result<(f64, Vec<Complex64>, Vec<Complex64>)> {
        if cfg.n != self.n || cfg.t != self.t {
            return Err(Error::Config(String::from(
                "config does not match state shape",
            )));
        }
        i.validate(self.n)?;
        let norm = self.norm_sqr();
        if math::abs(norm - 1.0) > NORM_TOL {
            return Err(Error::NormDrift { norm_sqr: norm });
        }
        let threshold = cfg.accept_threshold();
        let layers = self.split_by_accept_count(i);
        let dim = self.amp.len();
        let mut accept = vec![c(0.0); dim];
        let mut reject = vec![c(0.0); dim];
        for (count, layer) in layers.into_iter().enumerate() {
            let target = if count >= threshold {
                &mut accept
            } else {
                &mut reject
            };
            for (slot, v) in target.iter_mut().zip(layer) {
                *slot += v;
            }
        }
        let p_accept = accept
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .clamp(0.0, 1.0);
        Ok((p_accept, accept, reject))
    }

    /// Sampled round measurement: accept probability, drawn outcome and
    /// post-measurement state.
    pub fn measure_round<R: RngCore + ?Sized>(
        &self,
        i: ShiftIndex,
        cfg: &ProtocolConfig,
        rng: &mut R,
    ) -> Result<RoundMeasurement> {
        let (p_accept, accept, reject) = self.split(i, cfg)?;
        let accepted = rng::uniform_f64(rng) < p_accept;
        let (p, vec) = if accepted {
            (p_accept, accept)
        } else {
            (1.0 - p_accept, reject)
        };
        if p < PROB_FLOOR {
            return Err(Error::VanishingOutcome);
        }
        let scale = 1.0 / math::sqrt(p);
        let amp = vec.into_iter().map(|a| a * scale).collect();
        Ok(RoundMeasurement {
            outcome: if accepted {
                Outcome::Accept
            } else {
                Outcome::Reject
            },
            p_accept,
            post: JointState {
                n: self.n,
                t: self.t,
                amp,
            },
        })
    }
}

#[derive(Clone, Debug)]
pub struct RoundMeasurement {
    pub outcome: Outcome,
    pub p_accept: f64,
    pub post: JointState,
}

/// Log record for one executed round.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    pub shift: ShiftIndex,
    pub p_accept: f64,
    pub outcome: Outcome,
}

impl core::fmt::Display for RoundRecord {
    /// Trace line format: `round=<i> p_accept=<float17> outcome=<A|R>`.
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "round={} p_accept={:.16e} outcome={}",
            self.shift.0,
            self.p_accept,
            match self.outcome {
                Outcome::Accept => "A",
                Outcome::Reject => "R",
            }
        )
    }
}

/// A sampled protocol execution.
#[derive(Clone, Debug)]
pub struct ProtocolRun {
    /// 1 if any round accepted.
    pub answer: u8,
    pub rounds: Vec<RoundRecord>,
}

/// Runs the sequential-measurement protocol: rounds in `cfg.shift_order`
/// on the same message state, answer 1 at the first accept.
pub fn run_protocol<R: RngCore + ?Sized>(
    inst: &ShapInstance,
    cfg: &ProtocolConfig,
    rng: &mut R,
) -> Result<ProtocolRun> {
    let mut state = JointState::prepare(inst, cfg)?;
    let mut rounds = Vec::with_capacity(cfg.shift_order.len());
    for &shift in &cfg.shift_order {
        let m = state.measure_round(shift, cfg, rng)?;
        rounds.push(RoundRecord {
            shift,
            p_accept: m.p_accept,
            outcome: m.outcome,
        });
        if m.outcome == Outcome::Accept {
            return Ok(ProtocolRun { answer: 1, rounds });
        }
        state = m.post;
    }
    Ok(ProtocolRun { answer: 0, rounds })
}

/// Exact probability that the protocol answers 1, computed along the
/// single all-reject path: `1 - ||(I-P_last) ... (I-P_first) psi||^2`.
/// Any accept terminates with answer 1, so the all-reject survival is
/// the whole answer distribution.
pub fn exact_answer_prob(inst: &ShapInstance, cfg: &ProtocolConfig) -> Result<f64> {
    let mut state = JointState::prepare(inst, cfg)?;
    let mut survival = 1.0f64;
    for &shift in &cfg.shift_order {
        let (p_reject, post) = state.project(shift, cfg, Outcome::Reject)?;
        survival *= p_reject;
        match post {
            Some(s) => state = s,
            None => {
                survival = 0.0;
                break;
            }
        }
    }
    Ok((1.0 - survival).clamp(0.0, 1.0))
}

/// Per-round error accounting along the right-outcome path.
#[derive(Clone, Debug)]
pub struct DisturbanceRound {
    pub shift: ShiftIndex,
    pub right: Outcome,
    /// Probability of the right outcome given all previous rounds came
    /// out right.
    pub p_right: f64,
    /// `1 - p_right`: probability this round produces the first wrong
    /// outcome.
    pub eps_j: f64,
    /// Error of the same single measurement on a fresh state.
    pub fresh_error: f64,
}

#[derive(Clone, Debug)]
pub struct DisturbanceReport {
    pub rounds: Vec<DisturbanceRound>,
    /// Shifts whose per-shift subproblem is undefined (weight in the
    /// promise gap); they have no right outcome, are skipped on the
    /// path, and excluded from the budget checks.
    pub skipped: Vec<ShiftIndex>,
    /// Rounds the right-outcome path cannot reach: an earlier round's
    /// right outcome had probability 0 (its conditional error was 1),
    /// so conditioning on an all-right prefix is impossible from there
    /// on. Their first-wrong-outcome probabilities are 0.
    pub unreachable: Vec<ShiftIndex>,
    /// Hardest fresh single-round error observed.
    pub eps_prime_emp: f64,
    pub sum_eps: f64,
    /// `4 n sqrt(eps_prime_emp)`.
    pub per_round_budget: f64,
    /// `4 n^2 sqrt(eps_prime_emp)`.
    pub total_budget: f64,
    pub within_budget: bool,
}

/// Measures how much the earlier projective rounds disturb the later
/// ones: walks the right-outcome path, recording each round's
/// conditional error `eps_j` and comparing against the analytic budget
/// `eps_j <= 4 n sqrt(eps')` with `eps'` the measured fresh-state
/// single-round error.
pub fn disturbance_report(inst: &ShapInstance, cfg: &ProtocolConfig) -> Result<DisturbanceReport> {
    if inst.classify() == PromiseClass::Undefined {
        return Err(Error::Config(String::from(
            "disturbance accounting needs a promise-satisfying instance",
        )));
    }
    let fresh = JointState::prepare(inst, cfg)?;
    let mut rounds = Vec::new();
    let mut skipped = Vec::new();
    let mut unreachable = Vec::new();
    let mut eps_prime_emp = 0.0f64;
    let mut path = Some(fresh.clone());
    for &shift in &cfg.shift_order {
        let right = match inst.class_at_shift(shift)? {
            ShiftClass::One => Outcome::Accept,
            ShiftClass::Zero => Outcome::Reject,
            ShiftClass::Gap => {
                skipped.push(shift);
                continue;
            }
        };
        let (p_fresh, _) = fresh.project(shift, cfg, right)?;
        let fresh_error = 1.0 - p_fresh;
        eps_prime_emp = eps_prime_emp.max(fresh_error);

        let state = match path {
            Some(ref s) => s,
            None => {
                unreachable.push(shift);
                continue;
            }
        };
        let (p_right, post) = state.project(shift, cfg, right)?;
        rounds.push(DisturbanceRound {
            shift,
            right,
            p_right,
            eps_j: 1.0 - p_right,
            fresh_error,
        });
        path = post;
    }
    let sum_eps: f64 = rounds.iter().map(|r| r.eps_j).sum();
    let n = cfg.n as f64;
    let per_round_budget = 4.0 * n * math::sqrt(eps_prime_emp);
    let total_budget = 4.0 * n * n * math::sqrt(eps_prime_emp);
    let within_budget = rounds
        .iter()
        .all(|r| r.eps_j <= per_round_budget + 1e-12)
        && sum_eps <= total_budget + 1e-12;
    Ok(DisturbanceReport {
        rounds,
        skipped,
        unreachable,
        eps_prime_emp,
        sum_eps,
        per_round_budget,
        total_budget,
        within_budget,
    })
}
