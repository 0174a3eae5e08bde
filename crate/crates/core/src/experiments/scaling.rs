use std::fmt::Write as _;
use std::time::{Duration, Instant};

use super::{cell, longest_quiet_arc, median, over_grid, ExperimentConfig, VERSION};
use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::walk::{mixing_time, MixingOptions, StartMode, Starts};

/// Largest `n` mixed from every start under [`StartPolicy::Auto`].
pub const ALL_STARTS_MAX_N: usize = 1024;

/// Which starts each replication maximizes over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StartPolicy {
    /// Every vertex.
    All,
    /// `starts` random vertices plus the centre of the longest quiet arc.
    Sampled,
    /// `All` up to [`ALL_STARTS_MAX_N`], `Sampled` above.
    Auto,
}

impl StartPolicy {
    pub fn parse(mode: Option<&str>) -> Result<Self> {
        match mode {
            None | Some("auto") => Ok(StartPolicy::Auto),
            Some("all") | Some("exact-all-starts") => Ok(StartPolicy::All),
            Some("sampled") | Some("sampled-starts") => Ok(StartPolicy::Sampled),
            Some(other) => Err(Error::invalid(format!("unknown start mode {other:?} (all, sampled, auto)"))),
        }
    }
}

/// One `(n, replication)` mixing measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRecord {
    pub n: usize,
    pub rep: usize,
    pub master_seed: u64,
    pub seed: u64,
    /// `None` when censored at the cap.
    pub tau: Option<u64>,
    pub mode: StartMode,
    /// `ln² n`
    pub log_sq_n: f64,
    /// Wall time of the mixing computation; kept out of the CSV.
    pub wall_time: Duration,
}

impl ScalingRecord {
    pub fn censored(&self) -> bool {
        self.tau.is_none()
    }

    /// `τ / ln² n`, infinite when censored.
    pub fn ratio(&self) -> f64 {
        self.tau.map_or(f64::INFINITY, |t| t as f64 / self.log_sq_n)
    }
}

/// Per-`n` summary: censored runs count as `τ = ∞` in the median.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingSummary {
    pub n: usize,
    pub reps: usize,
    pub censored: usize,
    pub median_ratio: f64,
}

#[derive(Clone, Debug)]
pub struct ScalingRun {
    pub master_seed: u64,
    pub records: Vec<ScalingRecord>,
    pub summaries: Vec<ScalingSummary>,
}

pub const SCALING_HEADER: &str = "kind,n,rep,master_seed,seed,mode,tau,censored,log_sq_n,ratio,version";

impl ScalingRun {
    fn summarize(records: &[ScalingRecord]) -> Vec<ScalingSummary> {
        let mut out: Vec<ScalingSummary> = Vec::new();
        for r in records {
            if out.last().is_none_or(|s| s.n != r.n) {
                let group: Vec<&ScalingRecord> = records.iter().filter(|x| x.n == r.n).collect();
                let ratios: Vec<f64> = group.iter().map(|x| x.ratio()).collect();
                out.push(ScalingSummary {
                    n: r.n,
                    reps: group.len(),
                    censored: group.iter().filter(|x| x.censored()).count(),
                    median_ratio: median(&ratios).expect("non-empty group"),
                });
            }
        }
        out
    }

    /// Recomputes the summaries from the records and compares.
    pub fn verify(&self) -> Result<()> {
        if Self::summarize(&self.records) != self.summaries {
            return Err(Error::Validation("scaling summary does not match its records".into()));
        }
        Ok(())
    }

    pub fn any_censored(&self) -> bool {
        self.records.iter().any(ScalingRecord::censored)
    }

    /// `max / min` over `n` of the median ratio.
    pub fn spread(&self) -> f64 {
        let meds = self.summaries.iter().map(|s| s.median_ratio);
        let max = meds.clone().fold(f64::NEG_INFINITY, f64::max);
        let min = meds.fold(f64::INFINITY, f64::min);
        max / min
    }

    /// Record rows then one `summary` row per `n` (ratio column holds the median).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{SCALING_HEADER}");
        for r in &self.records {
            let mode = serde_json::to_value(r.mode).expect("mode").as_str().unwrap_or_default().to_string();
            let tau = r.tau.map_or_else(String::new, |t| t.to_string());
            let _ = writeln!(
                out,
                "record,{},{},{},{},{mode},{tau},{},{},{},{VERSION}",
                r.n,
                r.rep,
                r.master_seed,
                r.seed,
                r.censored(),
                r.log_sq_n,
                cell(r.ratio())
            );
        }
        for s in &self.summaries {
            let log_sq = (s.n as f64).ln().powi(2);
            let _ = writeln!(
                out,
                "summary,{},,{},,,,{},{log_sq},{},{VERSION}",
                s.n,
                self.master_seed,
                s.censored,
                cell(s.median_ratio)
            );
        }
        out
    }

    /// `n,rep,wall_time_ms`, for runs that want timings next to the primary CSV.
    pub fn timing_csv(&self) -> String {
        let mut out = String::from("n,rep,wall_time_ms\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{},{:.3}", r.n, r.rep, r.wall_time.as_secs_f64() * 1e3);
        }
        out
    }
}

/// Stream key for start sampling, distinct from graph sampling.
const START_STREAM: u64 = 0x5354_4152_5453;

/// Samples `H_{n,k,c/n}` for every grid cell and measures τ_mix.
pub fn run_scaling(config: &ExperimentConfig) -> Result<ScalingRun> {
    let policy = StartPolicy::parse(config.mode.as_deref())?;
    let options = MixingOptions { cap: config.cap, ..MixingOptions::default() };
    let records = over_grid(config, |r| {
        let sampled = match policy {
            StartPolicy::All => false,
            StartPolicy::Sampled => true,
            StartPolicy::Auto => r.n > ALL_STARTS_MAX_N,
        };
        let starts = if sampled {
            let include = longest_quiet_arc(&r.graph, config.k).map(|a| vec![a.center()]).unwrap_or_default();
            Starts::Sampled { size: config.starts, seed: derive_seed(r.seed, &[START_STREAM]), include }
        } else {
            Starts::All
        };
        let clock = Instant::now();
        let result = mixing_time(&r.graph, &starts, options)?;
        Ok(ScalingRecord {
            n: r.n,
            rep: r.rep,
            master_seed: config.seed,
            seed: r.seed,
            tau: result.tau,
            mode: result.mode,
            log_sq_n: (r.n as f64).ln().powi(2),
            wall_time: clock.elapsed(),
        })
    })?;
    let summaries = ScalingRun::summarize(&records);
    let run = ScalingRun { master_seed: config.seed, records, summaries };
    run.verify()?;
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ring_config() -> ExperimentConfig {
        ExperimentConfig { n: vec![16, 32], k: 1, c: int(0), reps: 2, ..ExperimentConfig::default() }
    }

    #[test]
    fn ring_ratio_grows() {
        let run = run_scaling(&ring_config()).unwrap();
        assert_eq!(run.records.len(), 4);
        assert!(run.summaries[1].median_ratio > run.summaries[0].median_ratio);
        // p = 0: both replications see the same ring.
        assert_eq!(run.records[0].tau, run.records[1].tau);
    }

    #[test]
    fn csv_is_reproducible_and_censoring_is_kept() {
        let mut config = ring_config();
        config.cap = 10;
        let a = run_scaling(&config).unwrap();
        assert!(a.any_censored());
        assert_eq!(a.records.len(), 4);
        assert_eq!(a.to_csv(), run_scaling(&config).unwrap().to_csv());
        assert!(a.to_csv().contains(",inf,"));
    }

    #[test]
    fn tampered_summary_fails_verification() {
        let mut run = run_scaling(&ring_config()).unwrap();
        run.summaries[0].median_ratio += 1.0;
        assert!(run.verify().is_err());
    }
}
