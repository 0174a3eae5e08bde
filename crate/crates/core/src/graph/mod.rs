//! Graphs: the `(n,k)`-ring, the Newman–Watts small world, blow-ups and the
//! edge-list file format.
//!
//! Vertices are `0..n`. Adjacency lists are kept sorted, so two graphs are equal
//! exactly when their edge sets are equal.

mod blowup;
mod io;
mod sample;

pub use blowup::{blow_up, BlowUpMap};
pub use io::{read_graph, read_graph_str, write_graph, write_graph_string};
pub use sample::{sample_small_world, GraphSpec};

use crate::error::{Error, Result};

/// A vertex set, stored as a sorted list without duplicates.
pub type VertexSet = Vec<usize>;

/// A finite simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edges: usize,
    /// Half-width of the ring this graph is known to contain, if any.
    ring_k: Option<usize>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicate edges and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Validation(format!("edge {{{u},{v}}} has an endpoint >= n = {n}")));
            }
            if u == v {
                return Err(Error::Validation(format!("self-loop at {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut m2 = 0;
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Validation(format!("duplicate edge {{{},{}}}", u.min(w[0]), u.max(w[0]))));
            }
            m2 += list.len();
        }
        Ok(Graph { adjacency, edges: m2 / 2, ring_k: None })
    }

    /// Builds from sorted, symmetric adjacency lists without re-checking.
    pub(crate) fn from_sorted_adjacency(adjacency: Vec<Vec<usize>>, ring_k: Option<usize>) -> Self {
        let edges = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        let g = Graph { adjacency, edges, ring_k };
        debug_assert!(g.validate().is_ok());
        g
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
        Self::from_sorted_adjacency(adjacency, None)
    }

    /// The path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path edges are valid")
    }

    /// The star `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star edges are valid")
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of edges `|E|`.
    pub fn m(&self) -> usize {
        self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn ring_k(&self) -> Option<usize> {
        self.ring_k
    }

    /// Marks this graph as containing the `(n,k)`-ring. Fails if it does not.
    pub fn with_ring_tag(mut self, k: usize) -> Result<Self> {
        self.ring_k = Some(k);
        self.validate()?;
        Ok(self)
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().copied().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Checks simplicity, symmetry, the handshake identity and (when tagged) ring containment.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let mut total = 0;
        for (u, list) in self.adjacency.iter().enumerate() {
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::Validation(format!("adjacency of {u} not strictly sorted")));
                }
            }
            for &v in list {
                if v >= n || v == u {
                    return Err(Error::Validation(format!("bad neighbour {v} of {u}")));
                }
                if !self.has_edge(v, u) {
                    return Err(Error::Validation(format!("asymmetric edge: {v} in adj({u}) but not vice versa")));
                }
            }
            total += list.len();
        }
        if total != 2 * self.edges {
            return Err(Error::Validation(format!("degree sum {total} != 2m = {}", 2 * self.edges)));
        }
        if let Some(k) = self.ring_k {
            if n <= 2 * k {
                return Err(Error::DegenerateRing { n, k });
            }
            for u in 0..n {
                for d in 1..=k {
                    if !self.has_edge(u, (u + d) % n) {
                        return Err(Error::Validation(format!(
                            "missing ring edge {{{u},{}}} for k = {k}",
                            (u + d) % n
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether the graph is connected (the empty graph counts as connected).
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    /// Whether the induced subgraph on `set` is connected. The empty set is not.
    pub fn is_connected_subset(&self, set: &[usize]) -> bool {
        let Some(&first) = set.first() else { return false };
        let mut inside = vec![false; self.n()];
        for &v in set {
            inside[v] = true;
        }
        let mut stack = vec![first];
        inside[first] = false;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if inside[v] {
                    inside[v] = false;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        reached == set.len()
    }
}

/// The `(n,k)`-ring: vertices at cyclic distance at most `k` are adjacent.
pub fn build_ring(n: usize, k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::invalid("ring half-width k must be at least 1"));
    }
    if n <= 2 * k {
        return Err(Error::DegenerateRing { n, k });
    }
    let adjacency = (0..n)
        .map(|u| {
            let mut list: Vec<usize> = (1..=k).flat_map(|d| [(u + d) % n, (u + n - d) % n]).collect();
            list.sort_unstable();
            list
        })
        .collect();
    Ok(Graph::from_sorted_adjacency(adjacency, Some(k)))
}

/// The cycle `C_n`, i.e. the `(n,1)`-ring.
pub fn cycle(n: usize) -> Result<Graph> {
    build_ring(n, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_cycle() {
        let g = build_ring(6, 1).unwrap();
        assert_eq!(g.m(), 6);
        assert!((0..6).all(|v| g.degree(v) == 2));
        assert_eq!(g.neighbors(0), &[1, 5]);
    }

    #[test]
    fn ring_18_3_is_6_regular() {
        let g = build_ring(18, 3).unwrap();
        assert_eq!(g.m(), 54);
        assert!((0..18).all(|v| g.degree(v) == 6));
        g.validate().unwrap();
    }

    #[test]
    fn ring_5_2_is_k5() {
        let g = build_ring(5, 2).unwrap();
        assert_eq!(g.m(), 10);
        let mut k5 = Graph::complete(5);
        k5 = k5.with_ring_tag(2).unwrap();
        assert_eq!(g, k5);
    }

    #[test]
    fn degenerate_rings_rejected() {
        assert!(matches!(build_ring(4, 2), Err(Error::DegenerateRing { n: 4, k: 2 })));
        assert!(matches!(build_ring(2, 1), Err(Error::DegenerateRing { .. })));
        assert!(build_ring(5, 0).is_err());
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
    }

    #[test]
    fn ring_tag_checked() {
        assert!(Graph::path(5).with_ring_tag(1).is_err());
        assert!(cycle(5).unwrap().with_ring_tag(1).is_ok());
    }

    #[test]
    fn connectivity() {
        assert!(Graph::path(4).is_connected());
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        assert!(g.is_connected_subset(&[0, 1]));
        assert!(!g.is_connected_subset(&[1, 2]));
        assert!(!g.is_connected_subset(&[]));
    }
}
