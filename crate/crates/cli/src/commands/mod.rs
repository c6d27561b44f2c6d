pub mod classical;
pub mod quantum;
pub mod rectangle;
pub mod sweep;
pub mod verify;

use shapeq_core::problem::{DistKind, DistSpec};
use shapeq_core::ShiftIndex;

use crate::CommandError;

/// Distribution names: `uniform`, `planted`, `planted-at:<i>`, `mixed`.
pub fn parse_dist(name: &str, n: usize) -> Result<DistSpec, CommandError> {
    let kind = if name == "uniform" {
        DistKind::Uniform
    } else if name == "planted" {
        DistKind::Planted
    } else if name == "mixed" {
        DistKind::Mixed
    } else if let Some(i) = name.strip_prefix("planted-at:") {
        let i: usize = i
            .parse()
            .map_err(|_| CommandError::Usage(format!("bad shift in dist {name:?}")))?;
        DistKind::PlantedAt(ShiftIndex(i))
    } else {
        return Err(CommandError::Usage(format!(
            "unknown dist {name:?} (expected uniform|planted|planted-at:<i>|mixed)"
        )));
    };
    DistSpec::new(kind, n).map_err(CommandError::Core)
}

/// Order-preserving parallel trial map; uses the dedicated pool when
/// `--threads` was given, rayon's global pool otherwise.
pub fn parallel_map<T, F>(pool: &Option<rayon::ThreadPool>, trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    use rayon::prelude::*;
    let work = || (0..trials).into_par_iter().map(&f).collect::<Vec<T>>();
    match pool {
        Some(p) => p.install(work),
        None => work(),
    }
}
