//! Reproducible experiment drivers behind the `nwmix` binary.
//!
//! Every replication `r` at size `n` samples its graph with seed
//! `derive_seed(master, [n, r])`, so any row can be regenerated on its own.
//! Replications run in parallel and are merged in `(n, r)` order; primary CSV
//! output carries no timing and is byte-identical across reruns.

mod conductance;
mod config;
mod quiet_arc;
mod scaling;
mod subtrees;

pub use conductance::{
    parse_mode as parse_conductance_mode, profile_graph, run_conductance, ConductanceReport, ConductanceRow,
};
pub use config::{ExperimentConfig, KEYS};
pub use quiet_arc::{longest_quiet_arc, DEFAULT_ESCAPE_WALKS, run_quiet_arc, QuietArc, QuietArcRecord, QuietArcRun};
pub use scaling::{run_scaling, ScalingRecord, ScalingRun, ScalingSummary, StartPolicy};
pub use subtrees::{run_subtree_verification, CheckOutcome, VerificationOptions, VerificationReport};

use rayon::prelude::*;

use crate::constants::ConstantSet;
use crate::error::Result;
use crate::graph::{sample_small_world, Graph, GraphSpec};
use crate::seed::derive_seed;

/// Version tag written into every output row.
pub const VERSION: &str = concat!("nwmix-", env!("CARGO_PKG_VERSION"));

/// Seed of replication `rep` at size `n`.
pub fn replicate_seed(master: u64, n: usize, rep: usize) -> u64 {
    derive_seed(master, &[n as u64, rep as u64])
}

/// One sampled graph of the grid.
#[derive(Clone, Debug)]
pub struct Replicate {
    pub n: usize,
    pub rep: usize,
    pub seed: u64,
    pub graph: Graph,
}

/// Samples every `(n, rep)` graph of the grid and maps `f` over them in parallel,
/// returning results in grid order.
pub(crate) fn over_grid<T, F>(config: &ExperimentConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Replicate) -> Result<T> + Sync,
{
    config.validate()?;
    let cells: Vec<(usize, usize)> =
        config.n.iter().flat_map(|&n| (0..config.reps).map(move |rep| (n, rep))).collect();
    cells
        .into_par_iter()
        .map(|(n, rep)| {
            let seed = replicate_seed(config.seed, n, rep);
            let graph = sample_small_world(&GraphSpec::new(n, config.k, config.c.clone(), seed)?)?;
            f(Replicate { n, rep, seed, graph })
        })
        .collect()
}

/// Median of finite-or-infinite values; `None` for an empty slice.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { 0.5 * (v[mid - 1] + v[mid]) })
}

/// Renders a float for CSV; infinities as `inf`.
pub(crate) fn cell(x: f64) -> String {
    if x.is_infinite() {
        "inf".to_string()
    } else {
        format!("{x}")
    }
}

/// The constant table for `(c, k)` as pretty JSON.
pub fn run_constants(c: &num_rational::BigRational, k: usize) -> Result<String> {
    let set = ConstantSet::solve(c, k)?;
    let mut value = set.to_json();
    value.as_object_mut().expect("object").insert("version".into(), VERSION.into());
    Ok(serde_json::to_string_pretty(&value).expect("json") + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians() {
        assert_eq!(median(&[]), None);
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, f64::INFINITY]), Some(3.0));
    }

    #[test]
    fn grid_order_is_stable() {
        let config = ExperimentConfig { n: vec![12, 10], reps: 3, ..ExperimentConfig::default() };
        let out = over_grid(&config, |r| Ok((r.n, r.rep, r.seed))).unwrap();
        let cells: Vec<_> = out.iter().map(|&(n, r, _)| (n, r)).collect();
        assert_eq!(cells, vec![(12, 0), (12, 1), (12, 2), (10, 0), (10, 1), (10, 2)]);
        assert_eq!(out[4].2, replicate_seed(0, 10, 1));
    }

    #[test]
    fn constants_json_has_regime() {
        let text = run_constants(&crate::rational::int(20_000), 1).unwrap();
        assert!(text.contains("\"regime\": \"large-c\""), "{text}");
    }
}
