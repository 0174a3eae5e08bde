//! `nwmix`: experiments on random walks in Newman–Watts small worlds.
//!
//! Exit codes: 0 success, 1 numerical failure or failed check, 2 invalid input,
//! 3 partial results (step cap hit, enumeration budget exhausted).

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nwmix::experiments::{
    self, run_conductance, run_constants, run_quiet_arc, run_scaling, run_subtree_verification, ExperimentConfig,
    VerificationOptions,
};
use nwmix::graph::{read_graph, sample_small_world, write_graph_string, Graph, GraphSpec};
use nwmix::gw::{CoeffSeq, OffspringLaw};
use nwmix::walk::{mixing_time, mixing_time_exact, MixingOptions, Starts};
use nwmix::Error;

#[derive(Parser)]
#[command(name = "nwmix", version, about = "Random walks and conductance on Newman-Watts small worlds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one graph and write it as an edge list.
    Generate(Common),
    /// Mixing time of one graph (JSON). Modes: all, sampled, rational.
    Mix(Common),
    /// Conductance profile Φ(2^-i) per graph (CSV). Modes: exact, local-search.
    Conductance(Common),
    /// Σ Φ⁻²(2^-i): JSON for --graph, CSV over the grid otherwise.
    FrBound(Common),
    /// Subtree series for --law (CSV), or the verification battery with --mode verify.
    Subtrees(Common),
    /// Proof constants for (c, k) as JSON.
    Constants(Common),
    /// τ_mix / ln² n over the n grid (CSV). Modes: auto, all, sampled.
    Scaling(Common),
    /// Longest quiet arcs and escape times from them (CSV).
    QuietArc(Common),
}

#[derive(Args, Clone, Default)]
struct Common {
    /// `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Ring size, or a comma-separated grid.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    k: Option<String>,
    /// Shortcut rate: p = c/n. Accepts integers, p/q and decimals.
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    reps: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Enumeration budget (connected sets).
    #[arg(long)]
    budget: Option<String>,
    /// Step cap for walks.
    #[arg(long)]
    cap: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    /// Monte Carlo samples.
    #[arg(long)]
    samples: Option<String>,
    /// Sampled start count for mixing.
    #[arg(long)]
    starts: Option<String>,
    /// Read the graph from this edge-list file instead of sampling.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Offspring law, e.g. poisson:7/2, binomial-plus:50:1/10:2.
    #[arg(long)]
    law: Option<String>,
    /// Series order.
    #[arg(long)]
    order: Option<String>,
    /// Also report the size-capped Φ_0 profile.
    #[arg(long)]
    phi0: bool,
    /// Write per-replication wall times here (scaling only).
    #[arg(long)]
    timing: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig, Error> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        let flags = [
            ("n", &self.n),
            ("k", &self.k),
            ("c", &self.c),
            ("seed", &self.seed),
            ("reps", &self.reps),
            ("budget", &self.budget),
            ("cap", &self.cap),
            ("mode", &self.mode),
            ("samples", &self.samples),
            ("starts", &self.starts),
            ("law", &self.law),
            ("order", &self.order),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        if let Some(out) = &self.out {
            config.out = Some(out.clone());
        }
        if let Some(graph) = &self.graph {
            config.graph = Some(graph.clone());
        }
        if self.phi0 {
            config.phi0 = true;
        }
        Ok(config)
    }
}

/// Outcome of a command that ran to completion.
enum Done {
    Complete,
    Partial(String),
    /// A verification check failed.
    Failed(String),
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn single_n(config: &ExperimentConfig) -> Result<usize, Error> {
    match config.n.as_slice() {
        [n] => Ok(*n),
        _ => Err(Error::InvalidParameter("this command takes a single --n".into())),
    }
}

/// The graph named by `--graph`, or one sampled with the config seed as is.
fn one_graph(config: &ExperimentConfig) -> Result<Graph, Error> {
    if let Some(path) = &config.graph {
        return read_graph(path);
    }
    config.validate()?;
    let spec = GraphSpec::new(single_n(config)?, config.k, config.c.clone(), config.seed)?;
    sample_small_world(&spec)
}

fn run(command: Command) -> Result<Done, Error> {
    match command {
        Command::Generate(common) => {
            let config = common.config()?;
            let g = one_graph(&config)?;
            emit(config.out.as_deref(), &write_graph_string(&g))?;
            Ok(Done::Complete)
        }
        Command::Mix(common) => {
            let config = common.config()?;
            let g = one_graph(&config)?;
            let result = match config.mode.as_deref() {
                None | Some("all") | Some("exact-all-starts") => {
                    mixing_time(&g, &Starts::All, MixingOptions { cap: config.cap, ..MixingOptions::default() })?
                }
                Some("sampled") | Some("sampled-starts") => {
                    let include = experiments::longest_quiet_arc(&g, config.k).map(|a| vec![a.center()]).unwrap_or_default();
                    let starts = Starts::Sampled { size: config.starts, seed: config.seed, include };
                    mixing_time(&g, &starts, MixingOptions { cap: config.cap, ..MixingOptions::default() })?
                }
                Some("rational") => mixing_time_exact(&g, &Starts::All, config.cap)?,
                Some(other) => return Err(Error::InvalidParameter(format!("unknown mix mode {other:?}"))),
            };
            emit(config.out.as_deref(), &(result.to_json() + "\n"))?;
            Ok(if result.censored { Done::Partial(format!("censored at cap {}", config.cap)) } else { Done::Complete })
        }
        Command::Conductance(common) => conductance(common, false),
        Command::FrBound(common) => conductance(common, true),
        Command::Subtrees(common) => {
            let config = common.config()?;
            match config.mode.as_deref() {
                None | Some("series") => {
                    let law: OffspringLaw = config.law.as_deref().unwrap_or("poisson:1").parse()?;
                    let seq = CoeffSeq::compute(&law, config.order)?;
                    emit(config.out.as_deref(), &seq.to_csv())?;
                    Ok(Done::Complete)
                }
                Some("verify") => {
                    let mut options = VerificationOptions { seed: config.seed, budget: config.budget, ..Default::default() };
                    if let Some(s) = config.samples {
                        options.mc_samples = s;
                    }
                    let report = run_subtree_verification(&options)?;
                    emit(config.out.as_deref(), &report.to_csv())?;
                    if report.passed() {
                        Ok(Done::Complete)
                    } else {
                        let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                        Ok(Done::Failed(format!("checks failed: {}", failed.join(", "))))
                    }
                }
                Some(other) => Err(Error::InvalidParameter(format!("unknown subtrees mode {other:?} (series, verify)"))),
            }
        }
        Command::Constants(common) => {
            let config = common.config()?;
            emit(config.out.as_deref(), &run_constants(&config.c, config.k)?)?;
            Ok(Done::Complete)
        }
        Command::Scaling(common) => {
            let config = common.config()?;
            let run = run_scaling(&config)?;
            emit(config.out.as_deref(), &run.to_csv())?;
            if let Some(path) = &common.timing {
                emit(Some(path), &run.timing_csv())?;
            }
            Ok(if run.any_censored() { Done::Partial("some replications censored".into()) } else { Done::Complete })
        }
        Command::QuietArc(common) => {
            let config = common.config()?;
            let run = run_quiet_arc(&config)?;
            emit(config.out.as_deref(), &run.to_csv())?;
            Ok(if run.any_censored() { Done::Partial("some escape walks censored".into()) } else { Done::Complete })
        }
    }
}

fn conductance(common: Common, fr: bool) -> Result<Done, Error> {
    let config = common.config()?;
    let report = match &config.graph {
        Some(path) => {
            let g = read_graph(path)?;
            let mode = experiments::parse_conductance_mode(config.mode.as_deref(), config.budget, config.seed)?;
            let c = nwmix::rational::to_f64(&config.c);
            let (fr_bound, phi0, fell_back) =
                experiments::profile_graph(&g, &mode, config.seed, config.phi0.then_some((c, config.k)))?;
            if fr {
                emit(config.out.as_deref(), &(fr_bound.to_json() + "\n"))?;
                return Ok(if fell_back { Done::Partial("budget exhausted; local search used".into()) } else { Done::Complete });
            }
            experiments::ConductanceReport {
                rows: vec![experiments::ConductanceRow {
                    n: g.n(),
                    rep: 0,
                    master_seed: None,
                    seed: None,
                    fr: fr_bound,
                    phi0,
                    fell_back,
                }],
            }
        }
        None => run_conductance(&config)?,
    };
    emit(config.out.as_deref(), &if fr { report.fr_csv() } else { report.profile_csv() })?;
    Ok(if report.partial() { Done::Partial("budget exhausted; local search used".into()) } else { Done::Complete })
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded { .. } => 3,
        Error::InvalidParameter(_)
        | Error::DegenerateRing { .. }
        | Error::Parse { .. }
        | Error::Disconnected
        | Error::Regime(_)
        | Error::Validation(_)
        | Error::Io { .. } => 2,
        Error::NotNormalized { .. }
        | Error::LengthMismatch { .. }
        | Error::NotMonotone { .. }
        | Error::Overflow(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Done::Complete) => ExitCode::SUCCESS,
        Ok(Done::Partial(why)) => {
            eprintln!("nwmix: partial results: {why}");
            ExitCode::from(3)
        }
        Ok(Done::Failed(why)) => {
            eprintln!("nwmix: {why}");
            ExitCode::FAILURE
        }
        Err(err) => {
            eprintln!("nwmix: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
