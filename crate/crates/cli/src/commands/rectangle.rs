//! `shapeq rectangle`: exact bias and entropy-condition evaluation of a
//! rectangle. The `--sets` file lists one instance per line in the
//! canonical text form; Alice halves `(x1, x2)` form side A, Bob halves
//! `(y1, y2)` form side B.

use std::str::FromStr;

use clap::Args;
use serde::Serialize;

use shapeq_core::analysis::rect::{rectangle_bias, rectangle_entropy_condition, RectanglePair};
use shapeq_core::ShapInstance;

use crate::config::require;
use crate::{emit, CommandError, CommandResult, CommonArgs, EXIT_OK};

#[derive(Args, Debug)]
pub struct RectangleArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// File of instances (canonical text form, one per line).
    #[arg(long)]
    pub sets: Option<std::path::PathBuf>,
}

#[derive(Serialize)]
struct RectangleReport {
    n: usize,
    a_size: usize,
    b_size: usize,
    uniform_mass: f64,
    planted_mass: f64,
    ratio: f64,
    uniform_mass_exact: String,
    planted_mass_exact: String,
    ratio_exact: String,
    entropy_condition_a: f64,
    entropy_condition_b: f64,
}

pub fn run(args: RectangleArgs) -> CommandResult {
    let path = require(args.sets.clone(), "--sets")?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CommandError::Io(format!("read {path:?}: {e}")))?;

    let mut n = None;
    let mut side_a = Vec::new();
    let mut side_b = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let inst = ShapInstance::from_str(line).map_err(|e| {
            CommandError::Usage(format!("{}:{}: {e}", path.display(), lineno + 1))
        })?;
        let m = inst.n();
        if *n.get_or_insert(m) != m {
            return Err(CommandError::Usage(format!(
                "{}:{}: mixed instance lengths",
                path.display(),
                lineno + 1
            )));
        }
        let x1 = inst.x1().to_mask().map_err(CommandError::Core)?;
        let x2 = inst.x2().to_mask().map_err(CommandError::Core)?;
        let y1 = inst.y1().to_mask().map_err(CommandError::Core)?;
        let y2 = inst.y2().to_mask().map_err(CommandError::Core)?;
        side_a.push(x1 | x2 << m);
        side_b.push(y1 | y2 << m);
    }
    let n = n.ok_or_else(|| CommandError::Usage("empty --sets file".to_string()))?;

    let rect = RectanglePair::new(n, side_a, side_b)?;
    let bias = rectangle_bias(&rect)?;
    let report = RectangleReport {
        n,
        a_size: rect.alice().len(),
        b_size: rect.bob().len(),
        uniform_mass: bias.uniform_mass_f64(),
        planted_mass: bias.planted_mass_f64(),
        ratio: bias.ratio_f64(),
        uniform_mass_exact: bias.uniform_mass.to_string(),
        planted_mass_exact: bias.planted_mass.to_string(),
        ratio_exact: bias.ratio.to_string(),
        entropy_condition_a: rectangle_entropy_condition(rect.alice(), n)?,
        entropy_condition_b: rectangle_entropy_condition(rect.bob(), n)?,
    };

    let body = if args.common.want_csv() {
        format!(
            "n,a_size,b_size,uniform_mass,planted_mass,ratio,entropy_condition_a,entropy_condition_b\n{},{},{},{},{},{},{},{}\n",
            report.n,
            report.a_size,
            report.b_size,
            crate::format_f64(report.uniform_mass),
            crate::format_f64(report.planted_mass),
            crate::format_f64(report.ratio),
            crate::format_f64(report.entropy_condition_a),
            crate::format_f64(report.entropy_condition_b),
        )
    } else {
        crate::report::to_json_pretty(&report)
    };
    emit(&args.common.out, &body).map_err(CommandError::Io)?;
    Ok(EXIT_OK)
}
