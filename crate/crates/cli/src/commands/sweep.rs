//! `shapeq sweep`: cost table across n for both protocols, optionally
//! with measured error columns.
//!
//! The quantum column is the protocol cost `4 t ceil(log2 n)`; the
//! classical column is the budget formula `2 ceil(c sqrt(n ln n))`
//! (uncapped, so the separation curve keeps its shape even where the
//! budget exceeds full sampling). `classical_k` is the clamped sample
//! count an actual run uses. With `--trials > 0`, error columns are
//! measured over sampled instances: the quantum error is the mean exact
//! wrong-answer probability (when `n^(2t)` fits the cap), the classical
//! error is a Monte Carlo rate.

use clap::Args;

use shapeq_core::classical::{run_sampling_protocol, SamplingConfig};
use shapeq_core::problem::{self, PromiseClass};
use shapeq_core::quantum::{self, ProtocolConfig};
use shapeq_core::rng;

use crate::config::{require, FileConfig};
use crate::report::{sweep_csv, SweepRow};
use crate::{emit, CommandError, CommandResult, CommonArgs, EXIT_OK};

use super::{parallel_map, parse_dist};

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Comma-separated list of instance lengths, e.g. 16,32,64,128.
    #[arg(long)]
    pub n: Option<String>,

    /// Repetitions per round for the quantum cost.
    #[arg(long)]
    pub t: Option<usize>,

    /// Classical budget multiplier.
    #[arg(long)]
    pub c: Option<f64>,

    /// Decision threshold for classical error runs.
    #[arg(long)]
    pub theta: Option<f64>,

    /// Sampled instances per n for the error columns (0 = costs only).
    #[arg(long)]
    pub trials: Option<u64>,

    /// Input distribution for error runs.
    #[arg(long)]
    pub dist: Option<String>,
}

pub fn run(args: SweepArgs) -> CommandResult {
    let file = FileConfig::load(&args.common.config)?;
    let n_list = require(file.string_field(args.n.clone(), "n")?, "--n")?;
    let t = file.usize_field(args.t, "t")?.unwrap_or(1);
    let c = file.f64_field(args.c, "c")?.unwrap_or(6.0);
    let theta = file.f64_field(args.theta, "theta")?.unwrap_or(13.0 / 30.0);
    let trials = file.u64_field(args.trials, "trials")?.unwrap_or(0);
    let dist_name = file
        .string_field(args.dist.clone(), "dist")?
        .unwrap_or_else(|| "mixed".to_string());

    let sizes: Vec<usize> = n_list
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| CommandError::Usage(format!("bad n value {tok:?}")))
        })
        .collect::<Result<_, _>>()?;
    let seed = if trials > 0 {
        require(file.u64_field(args.common.seed, "seed")?, "--seed")?
    } else {
        0
    };

    let pool = args.common.build_pool().map_err(CommandError::Io)?;
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let cfg = ProtocolConfig::new(n, t)?;
        let quantum_qubits = quantum::cost_report(&cfg).qubits_sent;
        let k_formula = (c * (n as f64 * (n as f64).ln()).sqrt()).ceil() as u64;
        let classical = SamplingConfig::with_multiplier(n, c, theta)?;

        let (quantum_error, classical_error) = if trials == 0 {
            (None, None)
        } else {
            let spec = parse_dist(&dist_name, n)?;
            let q_feasible = cfg.dimension().is_ok();
            let per_trial = parallel_map(&pool, trials, |trial| -> Result<_, shapeq_core::Error> {
                let mut rng = rng::for_trial(seed, trial);
                let inst = problem::sample(&spec, &mut rng)?;
                let class = inst.classify();
                let q = if q_feasible && class != PromiseClass::Undefined {
                    let p_one = quantum::exact_answer_prob(&inst, &cfg)?;
                    Some(match class {
                        PromiseClass::One => 1.0 - p_one,
                        _ => p_one,
                    })
                } else {
                    None
                };
                let run = run_sampling_protocol(&inst, &classical, &mut rng)?;
                let cl = match class {
                    PromiseClass::One => Some((run.answer != 1) as u64),
                    PromiseClass::Zero => Some((run.answer != 0) as u64),
                    PromiseClass::Undefined => None,
                };
                Ok((q, cl))
            });
            let mut q_sum = 0.0;
            let mut q_cnt = 0u64;
            let mut cl_err = 0u64;
            let mut cl_cnt = 0u64;
            for r in per_trial {
                let (q, cl) = r?;
                if let Some(p) = q {
                    q_sum += p;
                    q_cnt += 1;
                }
                if let Some(e) = cl {
                    cl_err += e;
                    cl_cnt += 1;
                }
            }
            (
                (q_cnt > 0).then(|| q_sum / q_cnt as f64),
                (cl_cnt > 0).then(|| cl_err as f64 / cl_cnt as f64),
            )
        };

        rows.push(SweepRow {
            n,
            t,
            quantum_qubits,
            classical_k: classical.k,
            classical_bits: 2 * k_formula,
            quantum_error,
            classical_error,
        });
    }

    let body = if args.common.want_csv() {
        sweep_csv(&rows)
    } else {
        crate::report::to_json_pretty(&rows)
    };
    emit(&args.common.out, &body).map_err(CommandError::Io)?;
    Ok(EXIT_OK)
}
