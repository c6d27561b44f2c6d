//! `shapeq classical`: the shared-randomness sampling protocol over
//! sampled instances.

use clap::Args;

use shapeq_core::classical::{run_sampling_protocol, SamplingConfig};
use shapeq_core::problem::{self, PromiseClass};
use shapeq_core::rng;

use crate::config::{require, FileConfig};
use crate::report::{Aggregate, ClassicalConfigEcho, ClassicalReport, ClassicalTrial};
use crate::{emit, CommandError, CommandResult, CommonArgs, EXIT_OK};

use super::{parallel_map, parse_dist};

#[derive(Args, Debug)]
pub struct ClassicalArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Instance length.
    #[arg(long)]
    pub n: Option<usize>,

    /// Samples per string (overrides --c).
    #[arg(long)]
    pub k: Option<usize>,

    /// Budget multiplier: k = ceil(c * sqrt(n ln n)), clamped to n.
    #[arg(long)]
    pub c: Option<f64>,

    /// Decision threshold on the estimated relative weight.
    #[arg(long)]
    pub theta: Option<f64>,

    /// Number of sampled instances.
    #[arg(long)]
    pub trials: Option<u64>,

    /// Input distribution: `uniform | planted | planted-at:<i> | mixed`.
    #[arg(long)]
    pub dist: Option<String>,
}

pub fn run(args: ClassicalArgs) -> CommandResult {
    let file = FileConfig::load(&args.common.config)?;
    let n = require(file.usize_field(args.n, "n")?, "--n")?;
    let k = file.usize_field(args.k, "k")?;
    let c = file.f64_field(args.c, "c")?;
    let theta = file.f64_field(args.theta, "theta")?.unwrap_or(13.0 / 30.0);
    let trials = require(file.u64_field(args.trials, "trials")?, "--trials")?;
    let seed = require(file.u64_field(args.common.seed, "seed")?, "--seed")?;
    let dist_name = file
        .string_field(args.dist.clone(), "dist")?
        .unwrap_or_else(|| "mixed".to_string());

    let cfg = match (k, c) {
        (Some(k), _) => SamplingConfig::new(n, k, theta)?,
        (None, multiplier) => SamplingConfig::with_multiplier(n, multiplier.unwrap_or(6.0), theta)?,
    };
    let spec = parse_dist(&dist_name, n)?;

    let pool = args.common.build_pool().map_err(CommandError::Io)?;
    let results: Vec<Result<ClassicalTrial, shapeq_core::Error>> =
        parallel_map(&pool, trials, |trial| {
            let mut rng = rng::for_trial(seed, trial);
            let inst = problem::sample(&spec, &mut rng)?;
            let class = inst.classify();
            let run = run_sampling_protocol(&inst, &cfg, &mut rng)?;
            Ok(ClassicalTrial {
                trial,
                true_class: class.to_string(),
                answer: run.answer,
                min_west: run.min_estimate,
                correct: match class {
                    PromiseClass::One => Some(run.answer == 1),
                    PromiseClass::Zero => Some(run.answer == 0),
                    PromiseClass::Undefined => None,
                },
            })
        });
    let mut records = Vec::with_capacity(results.len());
    for r in results {
        records.push(r?);
    }

    let defined = records.iter().filter(|r| r.correct.is_some()).count() as u64;
    let errors = records
        .iter()
        .filter(|r| r.correct == Some(false))
        .count() as u64;

    let report = ClassicalReport {
        cost_bits: cfg.cost_bits(),
        config: ClassicalConfigEcho {
            n,
            k: cfg.k,
            c,
            theta,
            dist: dist_name,
            trials,
            seed,
        },
        trials: records,
        aggregate: Aggregate::from_counts(trials, defined, errors),
    };

    let body = if args.common.want_csv() {
        report.to_csv()
    } else {
        crate::report::to_json_pretty(&report)
    };
    emit(&args.common.out, &body).map_err(CommandError::Io)?;
    Ok(EXIT_OK)
}
