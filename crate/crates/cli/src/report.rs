//! Report structures and emitters.
//!
//! CSV bodies are pure data: one header line plus one line per trial, no
//! comments, floats at 17 significant digits. JSON reports carry the
//! config echo, the per-trial records, and the aggregate block, and
//! round-trip losslessly through serde.

use serde::{Deserialize, Serialize};

/// 17 significant digits, scientific.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Wilson-free normal-approximation 95% interval for a rate.
pub fn ci95(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let p = successes as f64 / trials as f64;
    let half = 1.959963984540054 * (p * (1.0 - p) / trials as f64).sqrt();
    ((p - half).max(0.0), (p + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: u64,
    /// Trials whose instance satisfied the promise.
    pub defined: u64,
    /// Wrong answers among defined trials.
    pub errors: u64,
    pub error_rate: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

impl Aggregate {
    pub fn from_counts(trials: u64, defined: u64, errors: u64) -> Aggregate {
        let error_rate = if defined == 0 {
            0.0
        } else {
            errors as f64 / defined as f64
        };
        let (lo, hi) = ci95(errors, defined.max(1));
        Aggregate {
            trials,
            defined,
            errors,
            error_rate,
            ci95_low: lo,
            ci95_high: hi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumConfigEcho {
    pub n: usize,
    pub t: usize,
    pub tau: f64,
    pub eps_target: f64,
    pub dist: String,
    pub trials: u64,
    pub seed: u64,
    pub exact: bool,
    pub dim_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumTrial {
    pub trial: u64,
    pub true_class: String,
    /// Sampled answer (absent in exact mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub answer: Option<u8>,
    /// Rounds measured before termination (absent in exact mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds_measured: Option<usize>,
    /// Exact answer-1 probability (absent in sampled mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_one: Option<f64>,
    /// Probability of a wrong answer for defined instances.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_wrong: Option<f64>,
    /// Sampled-mode correctness for defined instances.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correct: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumReport {
    pub config: QuantumConfigEcho,
    pub qubits_sent: u64,
    pub entanglement_bits: u64,
    pub trials: Vec<QuantumTrial>,
    pub aggregate: Aggregate,
    /// Mean exact error probability over defined trials (exact mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_p_wrong: Option<f64>,
}

impl QuantumReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.config.exact {
            out.push_str("trial,true_class,p_one,p_wrong\n");
            for t in &self.trials {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    t.trial,
                    t.true_class,
                    t.p_one.map(format_f64).unwrap_or_default(),
                    t.p_wrong.map(format_f64).unwrap_or_default(),
                ));
            }
        } else {
            out.push_str("trial,true_class,answer,correct,rounds_measured\n");
            for t in &self.trials {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    t.trial,
                    t.true_class,
                    t.answer.map(|a| a.to_string()).unwrap_or_default(),
                    t.correct.map(|c| (c as u8).to_string()).unwrap_or_default(),
                    t.rounds_measured.map(|r| r.to_string()).unwrap_or_default(),
                ));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalConfigEcho {
    pub n: usize,
    pub k: usize,
    pub c: Option<f64>,
    pub theta: f64,
    pub dist: String,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalTrial {
    pub trial: u64,
    pub true_class: String,
    pub answer: u8,
    pub min_west: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correct: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalReport {
    pub config: ClassicalConfigEcho,
    pub cost_bits: u64,
    pub trials: Vec<ClassicalTrial>,
    pub aggregate: Aggregate,
}

impl ClassicalReport {
    /// Per-trial rows in the pinned schema
    /// `n,k,theta,true_class,answer,min_west,cost_bits`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,theta,true_class,answer,min_west,cost_bits\n");
        for t in &self.trials {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.config.n,
                self.config.k,
                format_f64(self.config.theta),
                t.true_class,
                t.answer,
                format_f64(t.min_west),
                self.cost_bits,
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub t: usize,
    pub quantum_qubits: u64,
    pub classical_k: usize,
    pub classical_bits: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical_error: Option<f64>,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out =
        String::from("n,t,quantum_qubits,classical_k,classical_bits,quantum_error,classical_error\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n,
            r.t,
            r.quantum_qubits,
            r.classical_k,
            r.classical_bits,
            r.quantum_error.map(format_f64).unwrap_or_default(),
            r.classical_error.map(format_f64).unwrap_or_default(),
        ));
    }
    out
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut body = serde_json::to_string_pretty(value).expect("serializable report");
    body.push('\n');
    body
}
