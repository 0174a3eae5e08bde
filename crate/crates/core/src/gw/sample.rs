use rand::Rng as _;
use rand_distr::{Binomial, Distribution, Poisson};
use rayon::prelude::*;

use super::{Convention, OffspringLaw};
use crate::error::{Error, Result};
use crate::rational::to_f64;
use crate::seed::{rng_for, Rng};

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl MonteCarloEstimate {
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = if n > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
        MonteCarloEstimate { mean, stderr: (var / n as f64).sqrt(), samples: n }
    }

    /// `|mean - target| ≤ z · stderr`.
    pub fn within(&self, target: f64, z: f64) -> bool {
        (self.mean - target).abs() <= z * self.stderr
    }
}

enum Sampler {
    Poisson(Poisson<f64>),
    Binomial(Binomial, u64),
    Fixed(u64),
    Table(Vec<f64>),
}

impl Sampler {
    fn new(law: &OffspringLaw) -> Result<Self> {
        let bad = |e: String| Error::invalid(format!("cannot sample {law}: {e}"));
        Ok(match law {
            OffspringLaw::Poisson { mean } => Sampler::Poisson(Poisson::new(to_f64(mean)).map_err(|e| bad(e.to_string()))?),
            OffspringLaw::Binomial { trials, p } => {
                Sampler::Binomial(Binomial::new(*trials, to_f64(p)).map_err(|e| bad(e.to_string()))?, 0)
            }
            OffspringLaw::BinomialPlus { trials, p, shift } => {
                Sampler::Binomial(Binomial::new(*trials, to_f64(p)).map_err(|e| bad(e.to_string()))?, *shift)
            }
            OffspringLaw::Deterministic { children } => Sampler::Fixed(*children),
            OffspringLaw::Explicit { pmf } => {
                let mut acc = 0.0;
                Sampler::Table(pmf.iter().map(|w| {
                    acc += to_f64(w);
                    acc
                }).collect())
            }
        })
    }

    fn draw(&self, rng: &mut Rng) -> u64 {
        match self {
            Sampler::Poisson(d) => d.sample(rng) as u64,
            Sampler::Binomial(d, shift) => d.sample(rng) + shift,
            Sampler::Fixed(d) => *d,
            Sampler::Table(cdf) => {
                let u: f64 = rng.random::<f64>() * cdf.last().copied().unwrap_or(1.0);
                cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1) as u64
            }
        }
    }
}

fn overflow() -> Error {
    Error::Overflow("counting subtrees")
}

/// Grows a tree below a node at `depth`, returning `N(z)` truncated at degree
/// `size - depth`: coefficient `t` counts subtrees rooted at this node with `t`
/// vertices, weighted per `convention`. Children are only drawn where they can
/// still matter, and the draw order does not depend on `convention`.
fn grow(sampler: &Sampler, rng: &mut Rng, depth: usize, size: usize, convention: Convention) -> Result<Vec<u128>> {
    let room = size - depth;
    let mut poly = vec![0u128; room + 1];
    poly[1] = 1;
    if room == 1 {
        return Ok(poly);
    }
    // by_kept[s][t]: ways to keep s children whose subtrees total t vertices.
    let mut by_kept = vec![vec![0u128; room]; room];
    by_kept[0][0] = 1;
    let children = sampler.draw(rng);
    for _ in 0..children {
        let child = grow(sampler, rng, depth + 1, size, convention)?;
        for s in (1..room).rev() {
            for a in 0..room {
                let pa = by_kept[s - 1][a];
                if pa == 0 {
                    continue;
                }
                for (b, &cb) in child.iter().enumerate().take(room - a).filter(|(_, c)| **c != 0) {
                    let term = pa.checked_mul(cb).ok_or_else(overflow)?;
                    by_kept[s][a + b] = by_kept[s][a + b].checked_add(term).ok_or_else(overflow)?;
                }
            }
        }
    }
    let mut weight = 1u128;
    for (s, row) in by_kept.iter().enumerate() {
        if s > 0 && convention == Convention::Ordered {
            weight *= s as u128;
        }
        for (t, &v) in row.iter().enumerate().take(room).skip(1) {
            let term = v.checked_mul(weight).ok_or_else(overflow)?;
            poly[t + 1] = poly[t + 1].checked_add(term).ok_or_else(overflow)?;
        }
    }
    Ok(poly)
}

/// Number of `size`-vertex root subtrees in one lazily sampled tree, counted per `convention`.
pub fn count_root_subtrees(law: &OffspringLaw, size: usize, rng: &mut Rng, convention: Convention) -> Result<u128> {
    if size == 0 {
        return Ok(0);
    }
    let sampler = Sampler::new(law)?;
    Ok(grow(&sampler, rng, 0, size, convention)?[size])
}

/// Monte Carlo estimate of `μ_size` from `samples` independent trees. Tree `i`
/// draws from `rng_for(seed, [size, i])`, so both conventions see the same trees.
pub fn brute_force_mu(
    law: &OffspringLaw,
    size: usize,
    samples: usize,
    seed: u64,
    convention: Convention,
) -> Result<MonteCarloEstimate> {
    if size == 0 || samples == 0 {
        return Err(Error::invalid("need size >= 1 and at least one sample"));
    }
    let sampler = Sampler::new(law)?;
    let counts = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, &[size as u64, i as u64]);
            grow(&sampler, &mut rng, 0, size, convention).map(|p| p[size] as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(MonteCarloEstimate::from_samples(&counts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_tree_size_three() {
        let law: OffspringLaw = "deterministic:2".parse().unwrap();
        let mut rng = rng_for(0, &[]);
        assert_eq!(count_root_subtrees(&law, 3, &mut rng, Convention::Unordered).unwrap(), 5);
        // Root with both children kept is counted in both orders.
        assert_eq!(count_root_subtrees(&law, 3, &mut rng, Convention::Ordered).unwrap(), 6);
        let est = brute_force_mu(&law, 3, 20, 1, Convention::Unordered).unwrap();
        assert_eq!((est.mean, est.stderr), (5.0, 0.0));
    }

    #[test]
    fn size_one_is_always_one() {
        let law: OffspringLaw = "poisson:3".parse().unwrap();
        let est = brute_force_mu(&law, 1, 100, 4, Convention::Ordered).unwrap();
        assert_eq!((est.mean, est.stderr), (1.0, 0.0));
    }

    #[test]
    fn deterministic_matches_series_both_conventions() {
        for d in 1..=3u64 {
            let law = OffspringLaw::deterministic(d).unwrap();
            let seq = crate::gw::CoeffSeq::compute(&law, 6).unwrap();
            let mut rng = rng_for(0, &[]);
            for convention in [Convention::Ordered, Convention::Unordered] {
                for j in 1..=6usize {
                    let count = count_root_subtrees(&law, j, &mut rng, convention).unwrap();
                    assert_eq!(count as f64, to_f64(&seq.mu(convention)[j]), "d={d} j={j} {convention:?}");
                }
            }
        }
    }

    #[test]
    fn explicit_law_sampling_is_reproducible() {
        let law: OffspringLaw = "explicit:1/4,1/4,1/2".parse().unwrap();
        let run = || brute_force_mu(&law, 4, 500, 9, Convention::Ordered).unwrap();
        assert_eq!(run(), run());
    }
}
