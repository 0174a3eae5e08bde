//! Conductance of vertex sets and the connected-conductance profile Φ(x).

mod enumerate;
mod local_search;
mod profile;

pub use enumerate::{connected_sets, count_connected_sets, for_each_connected_set, SetQuery, SetView, DEFAULT_BUDGET};
pub use local_search::LocalSearch;
pub use profile::{
    fr_bound, phi0_at_scale, phi_at_scale, phi_in_window, scale_count, FrBound, Mode, ScaleEntry, ScaleProfile, VolumeWindow,
};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Conductance `cut / volume` kept as an exact ratio.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Phi {
    pub cut: usize,
    pub volume: usize,
}

impl Phi {
    pub fn value(&self) -> f64 {
        self.cut as f64 / self.volume as f64
    }

    pub fn exact(&self) -> BigRational {
        BigRational::new(BigInt::from(self.cut), BigInt::from(self.volume))
    }

    /// `Φ⁻²`, exactly. Zero conductance has no finite inverse square.
    pub fn inverse_square(&self) -> Option<BigRational> {
        (self.cut > 0).then(|| {
            let r = BigRational::new(BigInt::from(self.volume), BigInt::from(self.cut));
            &r * &r
        })
    }
}

impl PartialEq for Phi {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Phi {}

impl PartialOrd for Phi {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Phi {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.cut as u128 * other.volume as u128;
        let rhs = other.cut as u128 * self.volume as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Edge counts of a vertex set `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutStats {
    pub set: VertexSet,
    /// `e(S, S^c)`
    pub cut: usize,
    /// `e(S, S)`: edges with both ends in `S`.
    pub internal: usize,
    /// `e(S) = Σ_{v∈S} deg v`
    pub volume: usize,
}

impl CutStats {
    pub fn phi(&self) -> Phi {
        Phi { cut: self.cut, volume: self.volume }
    }
}

/// Exact `e(S,S^c)`, `e(S,S)` and `e(S)` by scanning adjacency lists.
pub fn cut_stats(g: &Graph, set: &[usize]) -> Result<CutStats> {
    if set.is_empty() {
        return Err(Error::invalid("conductance of the empty set is undefined"));
    }
    let mut inside = vec![false; g.n()];
    for &v in set {
        if v >= g.n() {
            return Err(Error::invalid(format!("vertex {v} outside 0..{}", g.n())));
        }
        if std::mem::replace(&mut inside[v], true) {
            return Err(Error::invalid(format!("vertex {v} listed twice")));
        }
    }
    let (mut cut, mut twice_internal, mut volume) = (0, 0, 0);
    for &v in set {
        volume += g.degree(v);
        for &w in g.neighbors(v) {
            if inside[w] {
                twice_internal += 1;
            } else {
                cut += 1;
            }
        }
    }
    let internal = twice_internal / 2;
    assert_eq!(volume, 2 * internal + cut, "volume identity");
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    Ok(CutStats { set: sorted, cut, internal, volume })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle;

    #[test]
    fn arcs_on_a_cycle() {
        let g = cycle(12).unwrap();
        for len in 1..12 {
            let arc: Vec<usize> = (0..len).map(|i| (i + 5) % 12).collect();
            let s = cut_stats(&g, &arc).unwrap();
            assert_eq!((s.cut, s.volume), (2, 2 * len));
            assert_eq!(s.phi(), Phi { cut: 1, volume: len });
        }
    }

    #[test]
    fn whole_vertex_set_has_zero_cut() {
        let g = cycle(7).unwrap();
        let s = cut_stats(&g, &(0..7).collect::<Vec<_>>()).unwrap();
        assert_eq!(s.cut, 0);
        assert_eq!(s.phi().value(), 0.0);
    }

    #[test]
    fn single_vertex_of_k4() {
        let s = cut_stats(&Graph::complete(4), &[2]).unwrap();
        assert_eq!((s.cut, s.volume, s.internal), (3, 3, 0));
        assert_eq!(s.phi().value(), 1.0);
    }

    #[test]
    fn rejects_bad_sets() {
        let g = cycle(5).unwrap();
        assert!(cut_stats(&g, &[]).is_err());
        assert!(cut_stats(&g, &[5]).is_err());
        assert!(cut_stats(&g, &[1, 1]).is_err());
    }

    #[test]
    fn phi_orders_exactly() {
        assert!(Phi { cut: 1, volume: 3 } < Phi { cut: 2, volume: 5 });
        assert_eq!(Phi { cut: 2, volume: 6 }, Phi { cut: 1, volume: 3 });
    }
}
