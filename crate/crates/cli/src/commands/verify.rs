//! `shapeq verify`: the inequality verification suites, emitted as
//! JSON lines `{"name":..,"lhs":..,"rhs":..,"slack":..,"holds":..,
//! "params":{..}}` (or CSV without the params column). Exit code 0 only
//! when every report holds.

use std::collections::BTreeMap;

use clap::Args;
use serde::Serialize;

use shapeq_core::analysis::suites::{self, SuiteParams};
use shapeq_core::analysis::VerifierReport;

use crate::config::{require, FileConfig};
use crate::{emit, CommandError, CommandResult, CommonArgs, EXIT_FAIL, EXIT_OK};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,

    /// Cap on distribution sizes in bits.
    #[arg(long)]
    pub n_max: Option<u32>,

    /// Randomized trials per suite.
    #[arg(long)]
    pub trials: Option<u64>,
}

#[derive(Serialize)]
struct ReportLine<'a> {
    name: &'a str,
    lhs: f64,
    rhs: f64,
    slack: f64,
    holds: bool,
    params: &'a BTreeMap<String, f64>,
}

fn json_line(r: &VerifierReport) -> String {
    serde_json::to_string(&ReportLine {
        name: &r.name,
        lhs: r.lhs,
        rhs: r.rhs,
        slack: r.slack,
        holds: r.holds,
        params: &r.params,
    })
    .expect("serializable report")
}

pub fn run(args: VerifyArgs) -> CommandResult {
    let file = FileConfig::load(&args.common.config)?;
    let seed = require(file.u64_field(args.common.seed, "seed")?, "--seed")?;
    let trials = file.u64_field(args.trials, "trials")?.unwrap_or(1000) as usize;
    let size_cap = file
        .u64_field(args.n_max.map(u64::from), "n_max")?
        .unwrap_or(24) as u32;

    let params = SuiteParams {
        seed,
        trials,
        size_cap,
    };
    let results = if args.suite == "all" {
        suites::run_all(&params)?
    } else {
        vec![suites::run_suite(&args.suite, &params)?]
    };

    let mut body = String::new();
    if args.common.want_csv() {
        body.push_str("name,lhs,rhs,slack,holds\n");
    }
    let mut all_hold = true;
    for suite in &results {
        eprintln!(
            "suite {}: {} reports, {} violations, {} skipped, worst slack {:.3e}",
            suite.name,
            suite.reports.len(),
            suite.violations(),
            suite.skipped,
            suite.worst_slack()
        );
        all_hold &= suite.all_hold();
        for r in &suite.reports {
            if args.common.want_csv() {
                body.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.name,
                    crate::format_f64(r.lhs),
                    crate::format_f64(r.rhs),
                    crate::format_f64(r.slack),
                    r.holds
                ));
            } else {
                body.push_str(&json_line(r));
                body.push('\n');
            }
        }
    }
    emit(&args.common.out, &body).map_err(CommandError::Io)?;
    Ok(if all_hold { EXIT_OK } else { EXIT_FAIL })
}
