//! The lazy simple random walk: at each step stay put with probability 1/2,
//! otherwise move to a uniformly random neighbour.

mod exact;
mod mixing;
mod simulate;

pub use exact::{mixing_time_exact, stationary_exact, step_exact, tv_distance_exact};
pub use mixing::{mixing_time, MixingOptions, MixingResult, StartMode, Starts, DEFAULT_CAP, DEFAULT_THRESHOLD, THRESHOLD_SLACK};
pub use simulate::{escape_time, simulate_walk, EscapeOutcome};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Tolerance on total mass for a valid distribution.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A probability distribution over the vertices of a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Validates non-negativity and unit mass. Never renormalizes.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| w.is_nan() || **w < 0.0) {
            return Err(Error::invalid(format!("negative or NaN weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::NotNormalized { total });
        }
        Ok(ProbabilityVector(weights))
    }

    pub fn point_mass(n: usize, x: usize) -> Self {
        let mut w = vec![0.0; n];
        w[x] = 1.0;
        ProbabilityVector(w)
    }

    pub fn uniform(n: usize) -> Self {
        ProbabilityVector(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl std::ops::Index<usize> for ProbabilityVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// `π(x) = deg(x) / 2m`. Requires a connected graph.
pub fn stationary(g: &Graph) -> Result<ProbabilityVector> {
    if g.n() == 0 || !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.n() == 1 {
        return Ok(ProbabilityVector(vec![1.0]));
    }
    let two_m = (2 * g.m()) as f64;
    Ok(ProbabilityVector((0..g.n()).map(|v| g.degree(v) as f64 / two_m).collect()))
}

/// Transition operator of the lazy walk on a fixed graph.
#[derive(Clone, Debug)]
pub struct LazyKernel<'g> {
    graph: &'g Graph,
    half_inv_degree: Vec<f64>,
}

impl<'g> LazyKernel<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let half_inv_degree = (0..graph.n())
            .map(|v| match graph.degree(v) {
                0 => 0.0,
                d => 0.5 / d as f64,
            })
            .collect();
        LazyKernel { graph, half_inv_degree }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// `p_{x,y}`.
    pub fn transition(&self, x: usize, y: usize) -> f64 {
        if x == y {
            if self.graph.degree(x) == 0 { 1.0 } else { 0.5 }
        } else if self.graph.has_edge(x, y) {
            self.half_inv_degree[x]
        } else {
            0.0
        }
    }

    /// `(μP)(y) = μ(y)/2 + Σ_{x ~ y} μ(x) / (2 deg x)`.
    pub fn step(&self, mu: &ProbabilityVector) -> ProbabilityVector {
        let mut out = vec![0.0; mu.len()];
        let mut scratch = vec![0.0; mu.len()];
        self.step_into(&mu.0, &mut out, &mut scratch);
        ProbabilityVector(out)
    }

    /// Allocation-free step: writes `src · P` into `dst`, using `scratch` as workspace.
    pub fn step_into(&self, src: &[f64], dst: &mut [f64], scratch: &mut [f64]) {
        for ((s, &m), &h) in scratch.iter_mut().zip(src).zip(&self.half_inv_degree) {
            *s = m * h;
        }
        for (y, out) in dst.iter_mut().enumerate() {
            let inflow: f64 = self.graph.neighbors(y).iter().map(|&x| scratch[x]).sum();
            // Isolated vertices keep all their mass.
            let hold = if self.graph.degree(y) == 0 { src[y] } else { 0.5 * src[y] };
            *out = hold + inflow;
        }
    }
}

/// Convenience wrapper around [`LazyKernel::step`].
pub fn step(g: &Graph, mu: &ProbabilityVector) -> ProbabilityVector {
    LazyKernel::new(g).step(mu)
}

/// Half the L1 distance between two distributions.
pub fn tv_distance(mu: &ProbabilityVector, nu: &ProbabilityVector) -> Result<f64> {
    if mu.len() != nu.len() {
        return Err(Error::LengthMismatch { left: mu.len(), right: nu.len() });
    }
    Ok(half_l1(&mu.0, &nu.0))
}

pub(crate) fn half_l1(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}
