use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::{rng_for, Rng};

#[inline]
fn lazy_move(g: &Graph, at: usize, rng: &mut Rng) -> usize {
    let d = g.degree(at);
    if d == 0 || rng.random_bool(0.5) {
        at
    } else {
        g.neighbors(at)[rng.random_range(0..d)]
    }
}

/// A lazy-walk trajectory of `steps` transitions, `steps + 1` vertices in total.
pub fn simulate_walk(g: &Graph, start: usize, steps: usize, seed: u64) -> Result<Vec<usize>> {
    if start >= g.n() {
        return Err(Error::invalid(format!("start {start} outside 0..{}", g.n())));
    }
    let mut rng = rng_for(seed, &[start as u64]);
    let mut path = Vec::with_capacity(steps + 1);
    let mut at = start;
    path.push(at);
    for _ in 0..steps {
        at = lazy_move(g, at, &mut rng);
        path.push(at);
    }
    Ok(path)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EscapeOutcome {
    /// First step at which the walk stood outside the region.
    Escaped(u64),
    /// Still inside after `cap` steps (or the region has no exit).
    Censored(u64),
}

impl EscapeOutcome {
    pub fn steps(self) -> u64 {
        match self {
            EscapeOutcome::Escaped(t) | EscapeOutcome::Censored(t) => t,
        }
    }

    pub fn is_censored(self) -> bool {
        matches!(self, EscapeOutcome::Censored(_))
    }
}

/// First hitting time of the complement of `inside` by a lazy walk from `start`.
pub fn escape_time(g: &Graph, start: usize, inside: &[usize], seed: u64, cap: u64) -> Result<EscapeOutcome> {
    let n = g.n();
    let mut member = vec![false; n];
    for &v in inside {
        if v >= n {
            return Err(Error::invalid(format!("vertex {v} outside 0..{n}")));
        }
        member[v] = true;
    }
    if start >= n || !member[start] {
        return Err(Error::invalid(format!("start {start} must lie inside the region")));
    }
    if member.iter().all(|&m| m) {
        return Ok(EscapeOutcome::Censored(cap));
    }
    let mut rng = rng_for(seed, &[start as u64, 0x65736361]);
    let mut at = start;
    for t in 1..=cap {
        at = lazy_move(g, at, &mut rng);
        if !member[at] {
            return Ok(EscapeOutcome::Escaped(t));
        }
    }
    Ok(EscapeOutcome::Censored(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_ring, cycle};

    #[test]
    fn zero_steps() {
        assert_eq!(simulate_walk(&cycle(5).unwrap(), 3, 0, 1).unwrap(), vec![3]);
    }

    #[test]
    fn trajectories_follow_the_kernel_and_are_reproducible() {
        let g = build_ring(30, 2).unwrap();
        let a = simulate_walk(&g, 4, 5_000, 77).unwrap();
        assert_eq!(a, simulate_walk(&g, 4, 5_000, 77).unwrap());
        assert_ne!(a, simulate_walk(&g, 4, 5_000, 78).unwrap());
        assert!(a.windows(2).all(|w| w[0] == w[1] || g.has_edge(w[0], w[1])));
    }

    #[test]
    fn escape_from_singleton_takes_at_least_one_step() {
        let g = cycle(10).unwrap();
        for seed in 0..50 {
            assert!(matches!(escape_time(&g, 2, &[2], seed, 1000).unwrap(), EscapeOutcome::Escaped(t) if t >= 1));
        }
    }

    #[test]
    fn whole_graph_never_escapes() {
        let g = cycle(10).unwrap();
        let all: Vec<usize> = (0..10).collect();
        assert_eq!(escape_time(&g, 0, &all, 1, 500).unwrap(), EscapeOutcome::Censored(500));
    }

    #[test]
    fn escape_is_reproducible_and_validated() {
        let g = cycle(100).unwrap();
        let arc: Vec<usize> = (40..=60).collect();
        assert_eq!(escape_time(&g, 50, &arc, 9, 1 << 20).unwrap(), escape_time(&g, 50, &arc, 9, 1 << 20).unwrap());
        assert!(escape_time(&g, 10, &arc, 9, 100).is_err());
    }
}
