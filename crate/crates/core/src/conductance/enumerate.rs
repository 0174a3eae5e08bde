//! Exact enumeration of connected vertex sets.
//!
//! Each connected set is produced exactly once by extension from its root: the
//! set grows by a frontier vertex, and every frontier vertex passed over on the
//! way is excluded from the whole subtree that follows. No seen-set is kept.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Default cap on the number of sets visited by one enumeration.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// What to enumerate.
#[derive(Clone, Debug)]
pub struct SetQuery {
    /// Report only sets containing this vertex; otherwise report every set once
    /// (rooted at its smallest vertex).
    pub containing: Option<usize>,
    /// Sets larger than this are neither reported nor extended.
    pub max_size: usize,
    /// Sets whose volume exceeds this are neither reported nor extended.
    pub max_volume: usize,
    /// Sets smaller than this are extended but not reported.
    pub min_size: usize,
    /// Sets with smaller volume are extended but not reported.
    pub min_volume: usize,
    pub budget: u64,
}

impl SetQuery {
    /// Connected sets of exactly `size` vertices.
    pub fn of_size(size: usize) -> Self {
        SetQuery {
            containing: None,
            max_size: size,
            max_volume: usize::MAX,
            min_size: size,
            min_volume: 0,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn containing(mut self, v: usize) -> Self {
        self.containing = Some(v);
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

/// A connected set as seen during enumeration. `vertices` is in insertion order.
#[derive(Debug)]
pub struct SetView<'a> {
    pub vertices: &'a [usize],
    pub volume: usize,
    pub internal: usize,
}

impl SetView<'_> {
    pub fn cut(&self) -> usize {
        self.volume - 2 * self.internal
    }

    pub fn sorted(&self) -> VertexSet {
        let mut v = self.vertices.to_vec();
        v.sort_unstable();
        v
    }
}

struct Walker<'g, F> {
    g: &'g Graph,
    query: &'g SetQuery,
    blocked: Vec<bool>,
    in_set: Vec<bool>,
    set: Vec<usize>,
    volume: usize,
    internal: usize,
    visited: u64,
    visit: F,
}

impl<F: FnMut(&SetView<'_>)> Walker<'_, F> {
    fn add(&mut self, u: usize) {
        self.internal += self.g.neighbors(u).iter().filter(|&&w| self.in_set[w]).count();
        self.volume += self.g.degree(u);
        self.in_set[u] = true;
        self.set.push(u);
    }

    fn remove(&mut self, u: usize) {
        self.set.pop();
        self.in_set[u] = false;
        self.volume -= self.g.degree(u);
        self.internal -= self.g.neighbors(u).iter().filter(|&&w| self.in_set[w]).count();
    }

    fn report(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.query.budget {
            return Err(Error::BudgetExceeded { budget: self.query.budget });
        }
        if self.set.len() >= self.query.min_size && self.volume >= self.query.min_volume {
            (self.visit)(&SetView { vertices: &self.set, volume: self.volume, internal: self.internal });
        }
        Ok(())
    }

    /// Explores every connected superset of the current set reachable through `frontier`.
    fn extend(&mut self, frontier: &[usize]) -> Result<()> {
        if self.set.len() >= self.query.max_size {
            return Ok(());
        }
        for (i, &u) in frontier.iter().enumerate() {
            if self.volume + self.g.degree(u) > self.query.max_volume {
                continue;
            }
            self.add(u);
            let mut next = frontier[i + 1..].to_vec();
            let grown = next.len();
            for &w in self.g.neighbors(u) {
                if !self.blocked[w] {
                    self.blocked[w] = true;
                    next.push(w);
                }
            }
            let outcome = self.report().and_then(|()| self.extend(&next));
            for &w in &next[grown..] {
                self.blocked[w] = false;
            }
            self.remove(u);
            outcome?;
        }
        Ok(())
    }

    fn root(&mut self, r: usize) -> Result<()> {
        if self.query.max_size == 0 || self.g.degree(r) > self.query.max_volume {
            return Ok(());
        }
        self.blocked[r] = true;
        self.add(r);
        let mut frontier = Vec::new();
        for &w in self.g.neighbors(r) {
            if !self.blocked[w] {
                self.blocked[w] = true;
                frontier.push(w);
            }
        }
        let outcome = self.report().and_then(|()| self.extend(&frontier));
        for &w in &frontier {
            self.blocked[w] = false;
        }
        self.remove(r);
        outcome
    }
}

/// Calls `visit` once for every connected set matching `query`; returns the number
/// of sets visited (reported or not). Fails rather than truncating when the budget
/// runs out.
pub fn for_each_connected_set<F>(g: &Graph, query: &SetQuery, visit: F) -> Result<u64>
where
    F: FnMut(&SetView<'_>),
{
    let n = g.n();
    let mut walker = Walker {
        g,
        query,
        blocked: vec![false; n],
        in_set: vec![false; n],
        set: Vec::new(),
        volume: 0,
        internal: 0,
        visited: 0,
        visit,
    };
    match query.containing {
        Some(v) => {
            if v >= n {
                return Err(Error::invalid(format!("vertex {v} outside 0..{n}")));
            }
            walker.root(v)?;
        }
        None => {
            // root() leaves r blocked, so later roots never revisit sets through it.
            for r in 0..n {
                walker.root(r)?;
            }
        }
    }
    Ok(walker.visited)
}

/// All connected sets of `size` vertices (containing `v` if given), each sorted.
pub fn connected_sets(g: &Graph, size: usize, containing: Option<usize>, budget: u64) -> Result<Vec<VertexSet>> {
    check_size(g, size)?;
    let query = SetQuery { containing, ..SetQuery::of_size(size) }.budget(budget);
    let mut out = Vec::new();
    for_each_connected_set(g, &query, |s| out.push(s.sorted()))?;
    Ok(out)
}

/// `|B_j|` (or `|B_{j,v}|` when `containing` is given).
pub fn count_connected_sets(g: &Graph, size: usize, containing: Option<usize>, budget: u64) -> Result<u64> {
    check_size(g, size)?;
    let query = SetQuery { containing, ..SetQuery::of_size(size) }.budget(budget);
    let mut count = 0;
    for_each_connected_set(g, &query, |_| count += 1)?;
    Ok(count)
}

fn check_size(g: &Graph, size: usize) -> Result<()> {
    if size == 0 || size > g.n() {
        return Err(Error::invalid(format!("set size {size} outside 1..={}", g.n())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_ring, cycle};

    #[test]
    fn cycle_sets_are_arcs() {
        let g = cycle(9).unwrap();
        for j in 1..9 {
            assert_eq!(count_connected_sets(&g, j, None, DEFAULT_BUDGET).unwrap(), 9);
            assert_eq!(count_connected_sets(&g, j, Some(4), DEFAULT_BUDGET).unwrap(), j as u64);
        }
        assert_eq!(count_connected_sets(&g, 9, None, DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(count_connected_sets(&g, 9, Some(0), DEFAULT_BUDGET).unwrap(), 1);
    }

    #[test]
    fn complete_graph_pairs() {
        assert_eq!(count_connected_sets(&Graph::complete(4), 2, None, DEFAULT_BUDGET).unwrap(), 6);
        assert_eq!(count_connected_sets(&Graph::complete(6), 3, None, DEFAULT_BUDGET).unwrap(), 20);
    }

    #[test]
    fn sets_are_distinct_connected_and_sized() {
        let g = build_ring(10, 2).unwrap();
        let sets = connected_sets(&g, 4, None, DEFAULT_BUDGET).unwrap();
        let mut sorted = sets.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), sets.len());
        assert!(sets.iter().all(|s| s.len() == 4 && g.is_connected_subset(s)));
    }

    #[test]
    fn budget_overflow_is_an_error() {
        let g = Graph::complete(12);
        assert!(matches!(count_connected_sets(&g, 6, None, 100), Err(Error::BudgetExceeded { budget: 100 })));
    }

    #[test]
    fn rejects_bad_sizes() {
        let g = cycle(5).unwrap();
        assert!(connected_sets(&g, 0, None, 10).is_err());
        assert!(connected_sets(&g, 6, None, 10).is_err());
        assert!(connected_sets(&g, 2, Some(5), 10).is_err());
    }

    #[test]
    fn incremental_counts_match_direct() {
        let g = build_ring(11, 2).unwrap();
        let query = SetQuery { max_size: 5, min_size: 1, ..SetQuery::of_size(5) };
        for_each_connected_set(&g, &query, |s| {
            let stats = crate::conductance::cut_stats(&g, &s.sorted()).unwrap();
            assert_eq!((stats.volume, stats.internal, stats.cut), (s.volume, s.internal, s.cut()));
        })
        .unwrap();
    }
}
