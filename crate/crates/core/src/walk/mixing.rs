use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use super::{half_l1, stationary, LazyKernel, MASS_TOLERANCE};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::rng_for;

/// The mixing threshold in the definition of τ_mix.
pub const DEFAULT_THRESHOLD: f64 = 0.25;
/// Default censoring cap on walk length.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Slack allowed when asserting that TV distance never increases (float noise).
const MONOTONE_SLACK: f64 = 1e-12;
/// TV distances this close above the threshold count as reaching it. Small
/// graphs hit `d(t) = 1/4` exactly and float rounding lands on either side.
pub const THRESHOLD_SLACK: f64 = 1e-12;

/// Which starting vertices to maximize over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Starts {
    /// Every vertex; yields τ_mix exactly.
    All,
    /// `size` distinct vertices drawn with `seed`, plus every vertex in `include`.
    /// The maximum over these is a lower bound on τ_mix.
    Sampled { size: usize, seed: u64, include: Vec<usize> },
    /// Exactly these vertices.
    Explicit(Vec<usize>),
}

impl Starts {
    pub fn sampled(size: usize, seed: u64) -> Self {
        Starts::Sampled { size, seed, include: Vec::new() }
    }

    pub(crate) fn resolve(&self, n: usize) -> Result<(Vec<usize>, StartMode)> {
        let (mut list, mode) = match self {
            Starts::All => return Ok(((0..n).collect(), StartMode::AllStarts)),
            Starts::Sampled { size, seed, include } => {
                let mut rng = rng_for(*seed, &[n as u64, *size as u64]);
                let mut list = sample(&mut rng, n, (*size).min(n)).into_vec();
                list.extend(include);
                (list, StartMode::SampledStarts)
            }
            Starts::Explicit(list) => (list.clone(), StartMode::SampledStarts),
        };
        if let Some(bad) = list.iter().find(|&&v| v >= n) {
            return Err(Error::invalid(format!("start vertex {bad} outside 0..{n}")));
        }
        list.sort_unstable();
        list.dedup();
        let mode = if list.len() == n { StartMode::AllStarts } else { mode };
        Ok((list, mode))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StartMode {
    #[serde(rename = "exact-all-starts")]
    AllStarts,
    #[serde(rename = "sampled-starts")]
    SampledStarts,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixingOptions {
    /// TV threshold; 1/4 unless deliberately overridden.
    pub threshold: f64,
    /// Maximum number of steps per start before the start is declared censored.
    pub cap: u64,
}

impl Default for MixingOptions {
    fn default() -> Self {
        MixingOptions { threshold: DEFAULT_THRESHOLD, cap: DEFAULT_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StartTau {
    pub start: usize,
    /// `None` when the start did not mix within the cap.
    pub tau: Option<u64>,
}

/// Result of a mixing-time computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixingResult {
    pub n: usize,
    /// Max over included starts; `None` if any start was censored.
    pub tau: Option<u64>,
    pub mode: StartMode,
    pub per_start: Option<Vec<StartTau>>,
    pub cap: u64,
    pub censored: bool,
}

impl MixingResult {
    pub(crate) fn from_per_start(n: usize, mode: StartMode, cap: u64, per_start: Vec<StartTau>) -> Self {
        let censored = per_start.iter().any(|s| s.tau.is_none());
        let tau = if censored { None } else { per_start.iter().filter_map(|s| s.tau).max() };
        MixingResult { n, tau, mode, per_start: Some(per_start), cap, censored }
    }

    /// The start attaining the maximum (first one on ties).
    pub fn worst_start(&self) -> Option<usize> {
        let per = self.per_start.as_ref()?;
        let best = per.iter().map(|s| s.tau.unwrap_or(u64::MAX)).max()?;
        per.iter().find(|s| s.tau.unwrap_or(u64::MAX) == best).map(|s| s.start)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("mixing result serializes")
    }
}

/// Per-start mixing times of the lazy walk, by iterating the kernel from each
/// point mass until the TV distance to π drops to the threshold.
///
/// TV distance to stationarity is non-increasing for any Markov chain; the
/// iteration checks this at every step and fails loudly if float error ever
/// breaks it, as it does for total mass drifting away from 1.
pub fn mixing_time(g: &Graph, starts: &Starts, options: MixingOptions) -> Result<MixingResult> {
    if options.cap == 0 {
        return Err(Error::invalid("cap must be at least 1"));
    }
    let pi = stationary(g)?;
    let kernel = LazyKernel::new(g);
    let (list, mode) = starts.resolve(g.n())?;
    let per_start = list
        .par_iter()
        .map(|&x| {
            Ok(StartTau { start: x, tau: mix_from(&kernel, pi.as_slice(), x, options)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MixingResult::from_per_start(g.n(), mode, options.cap, per_start))
}

/// First `k` with `tv(μ_{k,x}, π) ≤ threshold`, or `None` if `k` would exceed the cap.
fn mix_from(kernel: &LazyKernel<'_>, pi: &[f64], x: usize, options: MixingOptions) -> Result<Option<u64>> {
    let n = pi.len();
    let mut mu = vec![0.0; n];
    mu[x] = 1.0;
    let mut tv = half_l1(&mu, pi);
    if tv <= options.threshold + THRESHOLD_SLACK {
        return Ok(Some(0));
    }
    let mut next = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    for k in 1..=options.cap {
        kernel.step_into(&mu, &mut next, &mut scratch);
        std::mem::swap(&mut mu, &mut next);
        let mut total = 0.0;
        let mut l1 = 0.0;
        for (m, p) in mu.iter().zip(pi) {
            total += m;
            l1 += (m - p).abs();
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::NotNormalized { total });
        }
        let now = 0.5 * l1;
        if now > tv + MONOTONE_SLACK {
            return Err(Error::NotMonotone { step: k, before: tv, after: now });
        }
        tv = now;
        if tv <= options.threshold + THRESHOLD_SLACK {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
