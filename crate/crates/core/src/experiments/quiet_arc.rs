use std::fmt::Write as _;

use super::{cell, median, over_grid, ExperimentConfig, VERSION};
use crate::error::Result;
use crate::graph::Graph;
use crate::rational::to_f64;
use crate::seed::derive_seed;
use crate::walk::{escape_time, EscapeOutcome};

/// A run of consecutive ring vertices `start, start+1, …` (mod n) all of degree `2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuietArc {
    pub start: usize,
    pub len: usize,
    pub n: usize,
}

impl QuietArc {
    pub fn vertices(&self) -> Vec<usize> {
        (0..self.len).map(|i| (self.start + i) % self.n).collect()
    }

    pub fn center(&self) -> usize {
        (self.start + self.len / 2) % self.n
    }
}

/// Longest quiet arc; the first in ring order on ties. `None` without any
/// vertex of degree `2k`.
pub fn longest_quiet_arc(g: &Graph, k: usize) -> Option<QuietArc> {
    let n = g.n();
    let quiet = |v: usize| g.degree(v) == 2 * k;
    let Some(anchor) = (0..n).find(|&v| !quiet(v)) else {
        return (n > 0).then_some(QuietArc { start: 0, len: n, n });
    };
    let mut best: Option<QuietArc> = None;
    let mut run_start = None;
    for step in 1..=n {
        let v = (anchor + step) % n;
        match (quiet(v), run_start) {
            (true, None) => run_start = Some(step),
            (false, Some(s)) => {
                let arc = QuietArc { start: (anchor + s) % n, len: step - s, n };
                let better = best.is_none_or(|b| arc.len > b.len || (arc.len == b.len && arc.start < b.start));
                if better {
                    best = Some(arc);
                }
                run_start = None;
            }
            _ => {}
        }
    }
    best
}

/// Quiet-arc measurements for one sampled graph.
#[derive(Clone, Debug, PartialEq)]
pub struct QuietArcRecord {
    pub n: usize,
    pub rep: usize,
    pub master_seed: u64,
    pub seed: u64,
    /// Zero when the longest arc has fewer than two vertices.
    pub arc_len: usize,
    pub arc_start: Option<usize>,
    /// `α ln n` with `α = 1/(8c)`.
    pub alpha_log_n: f64,
    pub escapes: usize,
    pub censored: usize,
    /// Censored walks count as infinite.
    pub escape_median: Option<f64>,
    /// Over walks that escaped.
    pub escape_mean: Option<f64>,
}

impl QuietArcRecord {
    pub fn meets_alpha(&self) -> bool {
        self.arc_len as f64 >= self.alpha_log_n
    }
}

#[derive(Clone, Debug)]
pub struct QuietArcRun {
    pub records: Vec<QuietArcRecord>,
}

pub const QUIET_ARC_HEADER: &str =
    "kind,n,rep,master_seed,seed,arc_len,arc_start,alpha_log_n,meets_alpha,walks,censored,escape_median,escape_mean,version";

impl QuietArcRun {
    /// Fraction of graphs at size `n` whose arc reaches `α ln n`.
    pub fn fraction_meeting(&self, n: usize) -> f64 {
        let group: Vec<_> = self.records.iter().filter(|r| r.n == n).collect();
        group.iter().filter(|r| r.meets_alpha()).count() as f64 / group.len().max(1) as f64
    }

    pub fn any_censored(&self) -> bool {
        self.records.iter().any(|r| r.censored > 0)
    }

    /// Record rows, then a `summary` row per `n` whose `meets_alpha` column holds the fraction.
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(String::new, cell);
        let mut out = String::new();
        let _ = writeln!(out, "{QUIET_ARC_HEADER}");
        for r in &self.records {
            let _ = writeln!(
                out,
                "record,{},{},{},{},{},{},{},{},{},{},{},{},{VERSION}",
                r.n,
                r.rep,
                r.master_seed,
                r.seed,
                r.arc_len,
                r.arc_start.map_or_else(String::new, |s| s.to_string()),
                cell(r.alpha_log_n),
                r.meets_alpha(),
                r.escapes,
                r.censored,
                opt(r.escape_median),
                opt(r.escape_mean),
            );
        }
        let mut seen = Vec::new();
        for r in &self.records {
            if seen.contains(&r.n) {
                continue;
            }
            seen.push(r.n);
            let _ = writeln!(
                out,
                "summary,{},,{},,,,{},{},,,,,{VERSION}",
                r.n,
                r.master_seed,
                cell(r.alpha_log_n),
                self.fraction_meeting(r.n)
            );
        }
        out
    }
}

/// Escape walks per graph unless `samples` is set.
pub const DEFAULT_ESCAPE_WALKS: usize = 1000;

/// Stream key for escape walks.
const ESCAPE_STREAM: u64 = 0x4553_4341_5045;

/// For every sampled graph: the longest quiet arc against `α ln n`, and
/// `samples` (default [`DEFAULT_ESCAPE_WALKS`]) lazy walks from its centre until they leave it (capped at `cap`).
pub fn run_quiet_arc(config: &ExperimentConfig) -> Result<QuietArcRun> {
    let c = to_f64(&config.c);
    let records = over_grid(config, |r| {
        let alpha_log_n = (r.n as f64).ln() / (8.0 * c);
        let arc = longest_quiet_arc(&r.graph, config.k).filter(|a| a.len >= 2);
        let mut record = QuietArcRecord {
            n: r.n,
            rep: r.rep,
            master_seed: config.seed,
            seed: r.seed,
            arc_len: arc.map_or(0, |a| a.len),
            arc_start: arc.map(|a| a.start),
            alpha_log_n,
            escapes: 0,
            censored: 0,
            escape_median: None,
            escape_mean: None,
        };
        if let Some(arc) = arc {
            let inside = arc.vertices();
            let outcomes = (0..config.samples.unwrap_or(DEFAULT_ESCAPE_WALKS))
                .map(|i| escape_time(&r.graph, arc.center(), &inside, derive_seed(r.seed, &[ESCAPE_STREAM, i as u64]), config.cap))
                .collect::<Result<Vec<_>>>()?;
            let times: Vec<f64> = outcomes
                .iter()
                .map(|o| match o {
                    EscapeOutcome::Escaped(t) => *t as f64,
                    EscapeOutcome::Censored(_) => f64::INFINITY,
                })
                .collect();
            let escaped: Vec<f64> = times.iter().copied().filter(|t| t.is_finite()).collect();
            record.escapes = outcomes.len();
            record.censored = outcomes.len() - escaped.len();
            record.escape_median = median(&times);
            record.escape_mean = (!escaped.is_empty()).then(|| escaped.iter().sum::<f64>() / escaped.len() as f64);
        }
        Ok(record)
    })?;
    Ok(QuietArcRun { records })
}
