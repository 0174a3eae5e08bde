//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use nwmix::graph::Graph;

/// Dense lazy kernel `P = (I + D⁻¹A)/2`.
pub fn dense_kernel(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut p = vec![vec![0.0; n]; n];
    for (x, row) in p.iter_mut().enumerate() {
        row[x] += 0.5;
        for &y in g.neighbors(x) {
            row[y] += 0.5 / g.degree(x) as f64;
        }
    }
    p
}

/// Per-start mixing times from powers of the dense kernel: row `x` of `P^t` is
/// the law after `t` steps from `x`.
pub fn dense_mixing_times(g: &Graph, threshold: f64, cap: usize) -> Vec<Option<u64>> {
    let n = g.n();
    let p = dense_kernel(g);
    let two_m = 2.0 * g.m() as f64;
    let pi: Vec<f64> = (0..n).map(|v| g.degree(v) as f64 / two_m).collect();
    let tv = |row: &[f64]| 0.5 * row.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let mut power: Vec<Vec<f64>> = (0..n).map(|x| (0..n).map(|y| if x == y { 1.0 } else { 0.0 }).collect()).collect();
    let mut out: Vec<Option<u64>> = vec![None; n];
    for t in 0..=cap {
        for x in 0..n {
            if out[x].is_none() && tv(&power[x]) <= threshold + 1e-12 {
                out[x] = Some(t as u64);
            }
        }
        if out.iter().all(Option::is_some) {
            break;
        }
        power = power
            .iter()
            .map(|row| (0..n).map(|y| (0..n).map(|z| row[z] * p[z][y]).sum()).collect())
            .collect();
    }
    out
}

/// Cut and volume of a vertex bitmask.
pub fn mask_stats(g: &Graph, mask: u64) -> (usize, usize) {
    let mut cut = 0;
    let mut volume = 0;
    for v in 0..g.n() {
        if mask >> v & 1 == 1 {
            volume += g.degree(v);
            cut += g.neighbors(v).iter().filter(|&&u| mask >> u & 1 == 0).count();
        }
    }
    (cut, volume)
}

/// Connectivity of the subgraph induced by a non-empty bitmask, by flood fill.
pub fn mask_connected(g: &Graph, mask: u64) -> bool {
    if mask == 0 {
        return false;
    }
    let first = mask.trailing_zeros() as usize;
    let mut seen = 1u64 << first;
    let mut stack = vec![first];
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            if mask >> u & 1 == 1 && seen >> u & 1 == 0 {
                seen |= 1 << u;
                stack.push(u);
            }
        }
    }
    seen == mask
}

/// Every connected vertex set of a graph with at most 24 vertices, as bitmasks.
pub fn all_connected_masks(g: &Graph) -> Vec<u64> {
    assert!(g.n() <= 24);
    (1u64..1 << g.n()).filter(|&m| mask_connected(g, m)).collect()
}

/// Minimum `cut/volume` over connected sets with volume in `[lo, hi]`, as an
/// exact rational, by brute force.
pub fn brute_min_phi(g: &Graph, masks: &[u64], lo: usize, hi: usize) -> Option<BigRational> {
    masks
        .iter()
        .map(|&m| mask_stats(g, m))
        .filter(|&(_, vol)| lo <= vol && vol <= hi)
        .map(|(cut, vol)| BigRational::new(BigInt::from(cut), BigInt::from(vol)))
        .min()
}
