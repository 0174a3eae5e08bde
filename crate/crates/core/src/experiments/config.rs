use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_rational::BigRational;

use crate::conductance::DEFAULT_BUDGET;
use crate::error::{Error, Result};
use crate::rational::{int, parse_rational, render};
use crate::walk::DEFAULT_CAP;

/// Parameters shared by every experiment.
///
/// Read from a line-based `key = value` file (`#` starts a comment) and then
/// overridden key by key, so that command-line flags win over the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub experiment: Option<String>,
    pub n: Vec<usize>,
    pub k: usize,
    pub c: BigRational,
    pub seed: u64,
    pub reps: usize,
    /// Step cap for mixing and escape simulations.
    pub cap: u64,
    /// Enumeration budget for exact conductance and subtree counting.
    pub budget: u64,
    /// Monte Carlo sample count (escape walks, sampled trees); each experiment
    /// has its own default.
    pub samples: Option<usize>,
    /// Sampled start count for large-n mixing.
    pub starts: usize,
    pub mode: Option<String>,
    pub out: Option<PathBuf>,
    pub law: Option<String>,
    pub order: usize,
    pub max_j: usize,
    pub graph: Option<PathBuf>,
    /// Also report the size-capped Φ_0 profile.
    pub phi0: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: None,
            n: vec![64],
            k: 1,
            c: int(1),
            seed: 0,
            reps: 1,
            cap: DEFAULT_CAP,
            budget: DEFAULT_BUDGET,
            samples: None,
            starts: 64,
            mode: None,
            out: None,
            law: None,
            order: crate::gw::DEFAULT_ORDER,
            max_j: 6,
            graph: None,
            phi0: false,
        }
    }
}

pub const KEYS: &[&str] = &[
    "experiment", "n", "k", "c", "seed", "reps", "cap", "budget", "samples", "starts", "mode", "out", "law", "order",
    "max_j", "graph", "phi0",
];

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    let plain = value.replace('_', "");
    if let Ok(v) = plain.parse() {
        return Ok(v);
    }
    // Accept `1e7`-style integers.
    if let Ok(f) = plain.parse::<f64>() {
        if f >= 0.0 && f.fract() == 0.0 && f < 1.8e19 {
            if let Ok(v) = format!("{}", f as u64).parse() {
                return Ok(v);
            }
        }
    }
    Err(Error::invalid(format!("{key}: not a valid number: {value:?}")))
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text, path)
    }

    /// Parses config text; `path` only labels errors.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut config = ExperimentConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { path: path.to_path_buf(), line: idx + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
            config.set(key.trim(), value.trim()).map_err(|e| err(e.to_string()))?;
        }
        Ok(config)
    }

    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "experiment" => self.experiment = Some(value.to_string()),
            "n" => {
                self.n = value
                    .split(',')
                    .map(|v| number::<usize>("n", v.trim()))
                    .collect::<Result<Vec<_>>>()?;
            }
            "k" => self.k = number("k", value)?,
            "c" => self.c = parse_rational(value)?,
            "seed" => self.seed = number("seed", value)?,
            "reps" => self.reps = number("reps", value)?,
            "cap" => self.cap = number("cap", value)?,
            "budget" => self.budget = number("budget", value)?,
            "samples" => self.samples = Some(number("samples", value)?),
            "starts" => self.starts = number("starts", value)?,
            "mode" => self.mode = Some(value.to_string()),
            "out" => self.out = Some(PathBuf::from(value)),
            "law" => self.law = Some(value.to_string()),
            "order" => self.order = number("order", value)?,
            "max_j" => self.max_j = number("max_j", value)?,
            "graph" => self.graph = Some(PathBuf::from(value)),
            "phi0" => {
                self.phi0 = value.parse().map_err(|_| Error::invalid(format!("phi0: expected true or false, got {value:?}")))?
            }
            _ => return Err(Error::invalid(format!("unknown key {key:?}; known keys: {}", KEYS.join(", ")))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() {
            return Err(Error::invalid("n grid is empty"));
        }
        if self.reps == 0 {
            return Err(Error::invalid("reps must be at least 1"));
        }
        if self.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if self.c < int(0) {
            return Err(Error::invalid("c must be non-negative"));
        }
        if self.cap == 0 || self.budget == 0 || self.samples == Some(0) {
            return Err(Error::invalid("cap, budget and samples must be positive"));
        }
        for &n in &self.n {
            if n <= 2 * self.k {
                return Err(Error::DegenerateRing { n, k: self.k });
            }
            if int(n as u64) < self.c {
                return Err(Error::invalid(format!("c = {} exceeds n = {n}, so p = c/n > 1", render(&self.c))));
            }
        }
        Ok(())
    }

    /// The config in the file format; parsing it back gives an equal config.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(e) = &self.experiment {
            let _ = writeln!(out, "experiment = {e}");
        }
        let n: Vec<String> = self.n.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "n = {}", n.join(","));
        let _ = writeln!(out, "k = {}", self.k);
        let _ = writeln!(out, "c = {}", render(&self.c));
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "reps = {}", self.reps);
        let _ = writeln!(out, "cap = {}", self.cap);
        let _ = writeln!(out, "budget = {}", self.budget);
        if let Some(s) = self.samples {
            let _ = writeln!(out, "samples = {s}");
        }
        let _ = writeln!(out, "starts = {}", self.starts);
        if let Some(m) = &self.mode {
            let _ = writeln!(out, "mode = {m}");
        }
        if let Some(o) = &self.out {
            let _ = writeln!(out, "out = {}", o.display());
        }
        if let Some(l) = &self.law {
            let _ = writeln!(out, "law = {l}");
        }
        let _ = writeln!(out, "order = {}", self.order);
        let _ = writeln!(out, "max_j = {}", self.max_j);
        if let Some(g) = &self.graph {
            let _ = writeln!(out, "graph = {}", g.display());
        }
        if self.phi0 {
            let _ = writeln!(out, "phi0 = true");
        }
        out
    }
}
