use num_rational::BigRational;

use super::{CoeffSeq, MonteCarloEstimate, OffspringLaw};
use crate::conductance::{count_connected_sets, for_each_connected_set, SetQuery};
use crate::error::Result;
use crate::graph::{sample_small_world, Graph, GraphSpec};
use crate::rational::int;
use crate::seed::derive_seed;

/// `|B_{j,v}|`: connected `j`-sets containing `v`.
pub fn count_bjv(g: &Graph, v: usize, j: usize, budget: u64) -> Result<u64> {
    count_connected_sets(g, j, Some(v), budget)
}

/// Empirical `|B_{j,v}|` over sampled small worlds, against the expected-count bounds.
#[derive(Clone, Debug)]
pub struct BjvRow {
    pub j: usize,
    pub bjv: MonteCarloEstimate,
    pub bj: MonteCarloEstimate,
    /// `(4(c+2k))^j`
    pub bjv_bound: BigRational,
    /// `n (4(c+2k))^j`
    pub bj_bound: BigRational,
    /// Ordered `μ_j` of `Bin(n-2k-1, p) + 2k`, the dominating tree count.
    pub dominating_mu: BigRational,
    /// The same law's plain root subtree count.
    pub dominating_subtrees: BigRational,
}

/// Samples `graphs` instances of `H_{n,k,c/n}` and tallies `|B_{j,v}|` and `|B_j|`
/// for `j = 1..=max_j`. Instance `i` uses seed `derive_seed(seed, [n, i])`.
pub fn sample_bjv(
    template: &GraphSpec,
    v: usize,
    max_j: usize,
    graphs: usize,
    seed: u64,
    budget: u64,
) -> Result<Vec<BjvRow>> {
    let (n, k) = (template.n, template.k);
    let mut bjv = vec![Vec::with_capacity(graphs); max_j + 1];
    let mut bj = vec![Vec::with_capacity(graphs); max_j + 1];
    for i in 0..graphs {
        let spec = GraphSpec { seed: derive_seed(seed, &[n as u64, i as u64]), ..template.clone() };
        let g = sample_small_world(&spec)?;
        let query = SetQuery { max_size: max_j, min_size: 1, budget, ..SetQuery::of_size(max_j) };
        let mut through_v = vec![0u64; max_j + 1];
        let mut all = vec![0u64; max_j + 1];
        for_each_connected_set(&g, &query, |s| {
            all[s.vertices.len()] += 1;
        })?;
        for_each_connected_set(&g, &query.clone().containing(v), |s| {
            through_v[s.vertices.len()] += 1;
        })?;
        for j in 1..=max_j {
            bjv[j].push(through_v[j] as f64);
            bj[j].push(all[j] as f64);
        }
    }
    let law = OffspringLaw::binomial_plus((n - 2 * k - 1) as u64, template.p_exact(), 2 * k as u64)?;
    let seq = CoeffSeq::compute(&law, max_j)?;
    let base = int(4) * (&template.c + int(2 * k as u64));
    Ok((1..=max_j)
        .map(|j| {
            let bound = num_traits::pow(base.clone(), j);
            BjvRow {
                j,
                bjv: MonteCarloEstimate::from_samples(&bjv[j]),
                bj: MonteCarloEstimate::from_samples(&bj[j]),
                bj_bound: &bound * int(n as u64),
                bjv_bound: bound,
                dominating_mu: seq.mu[j].clone(),
                dominating_subtrees: seq.subtrees[j].clone(),
            }
        })
        .collect())
}
