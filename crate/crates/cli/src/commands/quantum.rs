//! `shapeq quantum`: sampled executions or exact answer-probability
//! analysis of the entangled simultaneous-message protocol over sampled
//! instances.

use clap::Args;

use shapeq_core::problem::{self, PromiseClass};
use shapeq_core::quantum::{self, ProtocolConfig};
use shapeq_core::rng;

use crate::config::{require, FileConfig};
use crate::report::{Aggregate, QuantumConfigEcho, QuantumReport, QuantumTrial};
use crate::{emit, CommandError, CommandResult, CommonArgs, EXIT_OK};

use super::{parallel_map, parse_dist};

#[derive(Args, Debug)]
pub struct QuantumArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Instance length.
    #[arg(long)]
    pub n: Option<usize>,

    /// Repetitions per round.
    #[arg(long)]
    pub t: Option<usize>,

    /// Majority acceptance fraction.
    #[arg(long)]
    pub tau: Option<f64>,

    /// Target overall error (reporting only).
    #[arg(long)]
    pub eps: Option<f64>,

    /// Number of sampled instances.
    #[arg(long)]
    pub trials: Option<u64>,

    /// Input distribution: `uniform | planted | planted-at:<i> | mixed`.
    #[arg(long)]
    pub dist: Option<String>,

    /// Compute exact answer probabilities instead of sampling outcomes.
    #[arg(long)]
    pub exact: bool,

    /// Joint-dimension cap.
    #[arg(long)]
    pub dim_cap: Option<usize>,

    /// Print per-round trace lines to stderr (sampled mode).
    #[arg(long)]
    pub trace: bool,
}

pub fn run(args: QuantumArgs) -> CommandResult {
    let file = FileConfig::load(&args.common.config)?;
    let n = require(file.usize_field(args.n, "n")?, "--n")?;
    let t = file.usize_field(args.t, "t")?.unwrap_or(1);
    let tau = file.f64_field(args.tau, "tau")?.unwrap_or(0.511);
    let eps = file.f64_field(args.eps, "eps")?.unwrap_or(0.1);
    let trials = require(file.u64_field(args.trials, "trials")?, "--trials")?;
    let seed = require(file.u64_field(args.common.seed, "seed")?, "--seed")?;
    let dist_name = file
        .string_field(args.dist.clone(), "dist")?
        .unwrap_or_else(|| "mixed".to_string());
    let dim_cap = file
        .usize_field(args.dim_cap, "dim_cap")?
        .unwrap_or(quantum::DEFAULT_DIM_CAP);

    let spec = parse_dist(&dist_name, n)?;
    let cfg = ProtocolConfig::new(n, t)?
        .with_tau(tau)?
        .with_eps_target(eps)?
        .with_dim_cap(dim_cap)?;
    cfg.dimension()?; // fail fast on the resource cap

    let pool = args.common.build_pool().map_err(CommandError::Io)?;
    let exact = args.exact;
    let results: Vec<Result<QuantumTrial, shapeq_core::Error>> =
        parallel_map(&pool, trials, |trial| {
            let mut rng = rng::for_trial(seed, trial);
            let inst = problem::sample(&spec, &mut rng)?;
            let class = inst.classify();
            let mut record = QuantumTrial {
                trial,
                true_class: class.to_string(),
                answer: None,
                rounds_measured: None,
                p_one: None,
                p_wrong: None,
                correct: None,
            };
            if exact {
                let p_one = quantum::exact_answer_prob(&inst, &cfg)?;
                record.p_one = Some(p_one);
                record.p_wrong = match class {
                    PromiseClass::One => Some(1.0 - p_one),
                    PromiseClass::Zero => Some(p_one),
                    PromiseClass::Undefined => None,
                };
            } else {
                let run = quantum::run_protocol(&inst, &cfg, &mut rng)?;
                if args.trace {
                    for rec in &run.rounds {
                        eprintln!("trial={trial} {rec}");
                    }
                }
                record.answer = Some(run.answer);
                record.rounds_measured = Some(run.rounds.len());
                record.correct = match class {
                    PromiseClass::One => Some(run.answer == 1),
                    PromiseClass::Zero => Some(run.answer == 0),
                    PromiseClass::Undefined => None,
                };
            }
            Ok(record)
        });
    let mut records = Vec::with_capacity(results.len());
    for r in results {
        records.push(r?);
    }

    let defined = records
        .iter()
        .filter(|r| r.true_class != "undefined")
        .count() as u64;
    let errors = records
        .iter()
        .filter(|r| {
            r.correct == Some(false) || r.p_wrong.map(|p| p > 0.5).unwrap_or(false)
        })
        .count() as u64;
    let mean_p_wrong = if exact {
        let (sum, cnt) = records
            .iter()
            .filter_map(|r| r.p_wrong)
            .fold((0.0, 0u64), |(s, c), p| (s + p, c + 1));
        Some(if cnt == 0 { 0.0 } else { sum / cnt as f64 })
    } else {
        None
    };

    let cost = quantum::cost_report(&cfg);
    let report = QuantumReport {
        config: QuantumConfigEcho {
            n,
            t,
            tau,
            eps_target: eps,
            dist: dist_name,
            trials,
            seed,
            exact,
            dim_cap,
        },
        qubits_sent: cost.qubits_sent,
        entanglement_bits: cost.entanglement_bits,
        trials: records,
        aggregate: Aggregate::from_counts(trials, defined, errors),
        mean_p_wrong,
    };

    let body = if args.common.want_csv() {
        report.to_csv()
    } else {
        crate::report::to_json_pretty(&report)
    };
    emit(&args.common.out, &body).map_err(CommandError::Io)?;
    Ok(EXIT_OK)
}
