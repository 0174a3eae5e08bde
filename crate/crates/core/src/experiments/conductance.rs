use std::fmt::Write as _;

use super::{over_grid, ExperimentConfig, VERSION};
use crate::conductance::{fr_bound, phi0_at_scale, scale_count, FrBound, LocalSearch, Mode, ScaleProfile};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{render, to_f64};

/// Conductance profile of one graph.
#[derive(Clone, Debug)]
pub struct ConductanceRow {
    pub n: usize,
    pub rep: usize,
    pub master_seed: Option<u64>,
    pub seed: Option<u64>,
    pub fr: FrBound,
    pub phi0: Option<ScaleProfile>,
    /// Exact enumeration ran out of budget and local search filled in.
    pub fell_back: bool,
}

#[derive(Clone, Debug)]
pub struct ConductanceReport {
    pub rows: Vec<ConductanceRow>,
}

pub const PROFILE_HEADER: &str =
    "variant,n,rep,master_seed,seed,i,x,phi,volume_lo,volume_hi,certified,witness_size,version";
pub const FR_HEADER: &str = "n,rep,master_seed,seed,m,fr_sum,fr_sum_exact,certified,version";

fn opt(x: Option<u64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

impl ConductanceReport {
    /// True when some graph needed the local-search fallback.
    pub fn partial(&self) -> bool {
        self.rows.iter().any(|r| r.fell_back)
    }

    /// One row per scale and graph; `certified = false` marks heuristic values.
    pub fn profile_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{PROFILE_HEADER}");
        for r in &self.rows {
            let prefix = format!("{},{},{},{}", r.n, r.rep, opt(r.master_seed), opt(r.seed));
            let variants = std::iter::once(("phi", &r.fr.profile)).chain(r.phi0.as_ref().map(|p| ("phi0", p)));
            for (variant, profile) in variants {
                for e in &profile.entries {
                    let _ = writeln!(out, "{variant},{prefix},{},{VERSION}", e.csv_row());
                }
            }
        }
        out
    }

    /// One row per graph with Σ Φ⁻²(2^-i).
    pub fn fr_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{FR_HEADER}");
        for r in &self.rows {
            let exact = r.fr.sum_exact.as_ref().map_or_else(String::new, render);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{exact},{},{VERSION}",
                r.n,
                r.rep,
                opt(r.master_seed),
                opt(r.seed),
                r.fr.profile.m,
                r.fr.sum,
                r.fr.certified()
            );
        }
        out
    }
}

/// Parses `exact` (default) or `local-search`.
pub fn parse_mode(mode: Option<&str>, budget: u64, seed: u64) -> Result<Mode> {
    match mode {
        None | Some("exact") => Ok(Mode::Exact { budget }),
        Some("local-search") | Some("heuristic") => Ok(Mode::LocalSearch(LocalSearch::with_seed(seed))),
        Some(other) => Err(Error::invalid(format!("unknown conductance mode {other:?} (exact, local-search)"))),
    }
}

/// Profiles one graph, falling back to local search if exact enumeration runs out of budget.
pub fn profile_graph(g: &Graph, mode: &Mode, seed: u64, with_phi0: Option<(f64, usize)>) -> Result<(FrBound, Option<ScaleProfile>, bool)> {
    let (fr, mode, fell_back) = match fr_bound(g, mode) {
        Err(e) if e.is_budget() => {
            let fallback = Mode::LocalSearch(LocalSearch::with_seed(seed));
            (fr_bound(g, &fallback)?, fallback, true)
        }
        other => (other?, mode.clone(), false),
    };
    let phi0 = match with_phi0 {
        Some((c, k)) => {
            let max_size = 9 * g.n() / 10;
            let entries = (1..=scale_count(g.m()))
                .map(|i| {
                    let mut e = phi0_at_scale(g, 0.5f64.powi(i as i32), c, k, max_size, &mode)?;
                    e.i = i;
                    Ok(e)
                })
                .collect::<Result<Vec<_>>>()?;
            Some(ScaleProfile { m: g.m(), entries })
        }
        None => None,
    };
    Ok((fr, phi0, fell_back))
}

/// Φ(2^-i) profiles and FR sums for every grid graph.
pub fn run_conductance(config: &ExperimentConfig) -> Result<ConductanceReport> {
    let c = to_f64(&config.c);
    let rows = over_grid(config, |r| {
        let mode = parse_mode(config.mode.as_deref(), config.budget, r.seed)?;
        let (fr, phi0, fell_back) = profile_graph(&r.graph, &mode, r.seed, config.phi0.then_some((c, config.k)))?;
        Ok(ConductanceRow { n: r.n, rep: r.rep, master_seed: Some(config.seed), seed: Some(r.seed), fr, phi0, fell_back })
    })?;
    Ok(ConductanceReport { rows })
}
