//! Simulated annealing over connected vertex sets.

use rand::seq::IndexedRandom;
use rand::Rng as _;
use serde::Serialize;

use super::profile::VolumeWindow;
use super::Phi;
use crate::graph::{Graph, VertexSet};
use crate::seed::{rng_for, Rng};

/// Annealing parameters. The best feasible set over all restarts is returned.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalSearch {
    pub seed: u64,
    pub restarts: usize,
    pub iterations: usize,
    pub initial_temperature: f64,
    pub final_temperature: f64,
}

impl Default for LocalSearch {
    fn default() -> Self {
        LocalSearch { seed: 0, restarts: 32, iterations: 4000, initial_temperature: 0.2, final_temperature: 1e-3 }
    }
}

impl LocalSearch {
    pub fn with_seed(seed: u64) -> Self {
        LocalSearch { seed, ..Self::default() }
    }

    /// Best connected set found in `window`, or `None` if no restart reached it.
    pub(crate) fn run(&self, g: &Graph, window: &VolumeWindow, key: u64) -> Option<(Phi, VertexSet)> {
        let mut best: Option<(Phi, VertexSet)> = None;
        for r in 0..self.restarts {
            let mut rng = rng_for(self.seed, &[key, r as u64, g.n() as u64]);
            let mut state = State::new(g);
            state.seed_growth(&mut rng, window);
            state.anneal(&mut rng, window, self, &mut best);
        }
        best
    }
}

struct State<'g> {
    g: &'g Graph,
    in_set: Vec<bool>,
    /// `touch[v] = |N(v) ∩ S|`
    touch: Vec<usize>,
    members: Vec<usize>,
    volume: usize,
    cut: usize,
}

impl<'g> State<'g> {
    fn new(g: &'g Graph) -> Self {
        State { g, in_set: vec![false; g.n()], touch: vec![0; g.n()], members: Vec::new(), volume: 0, cut: 0 }
    }

    fn add(&mut self, v: usize) {
        let d = self.g.degree(v);
        self.cut = self.cut + d - 2 * self.touch[v];
        self.volume += d;
        self.in_set[v] = true;
        self.members.push(v);
        for &w in self.g.neighbors(v) {
            self.touch[w] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        let d = self.g.degree(v);
        self.cut = self.cut + 2 * self.touch[v] - d;
        self.volume -= d;
        self.in_set[v] = false;
        let pos = self.members.iter().position(|&u| u == v).expect("member");
        self.members.swap_remove(pos);
        for &w in self.g.neighbors(v) {
            self.touch[w] -= 1;
        }
    }

    fn boundary(&self) -> Vec<usize> {
        (0..self.g.n()).filter(|&v| !self.in_set[v] && self.touch[v] > 0).collect()
    }

    /// Whether `S \ {v}` stays connected (and nonempty).
    fn removable(&self, v: usize) -> bool {
        if self.members.len() <= 1 {
            return false;
        }
        let rest: Vec<usize> = self.members.iter().copied().filter(|&u| u != v).collect();
        self.g.is_connected_subset(&rest)
    }

    fn feasible(&self, window: &VolumeWindow) -> bool {
        window.contains(self.volume, self.members.len())
    }

    /// Feasible sets score Φ ∈ [0,1]; infeasible ones score above 1 by their distance to the window.
    fn energy(&self, window: &VolumeWindow) -> f64 {
        let phi = if self.volume == 0 { 1.0 } else { self.cut as f64 / self.volume as f64 };
        if self.feasible(window) {
            return phi;
        }
        let miss = window.lo.saturating_sub(self.volume)
            + self.volume.saturating_sub(window.hi)
            + self.members.len().saturating_sub(window.max_size);
        1.0 + phi + miss as f64 / window.hi.max(1) as f64
    }

    fn seed_growth(&mut self, rng: &mut Rng, window: &VolumeWindow) {
        let start = rng.random_range(0..self.g.n());
        self.add(start);
        while self.volume < window.lo {
            let boundary = self.boundary();
            let Some(&v) = boundary.choose(rng) else { break };
            self.add(v);
        }
    }

    fn record(&self, best: &mut Option<(Phi, VertexSet)>, window: &VolumeWindow) {
        if !self.feasible(window) {
            return;
        }
        let phi = Phi { cut: self.cut, volume: self.volume };
        let improves = match best {
            None => true,
            Some((b, _)) => phi <= *b,
        };
        if improves {
            let mut set = self.members.clone();
            set.sort_unstable();
            if best.as_ref().is_none_or(|(b, w)| phi < *b || set < *w) {
                *best = Some((phi, set));
            }
        }
    }

    fn anneal(&mut self, rng: &mut Rng, window: &VolumeWindow, params: &LocalSearch, best: &mut Option<(Phi, VertexSet)>) {
        self.record(best, window);
        let mut energy = self.energy(window);
        let steps = params.iterations.max(1);
        let cooling = (params.final_temperature / params.initial_temperature).powf(1.0 / steps as f64);
        let mut temperature = params.initial_temperature;
        for _ in 0..steps {
            temperature *= cooling;
            let grow = rng.random_bool(0.5);
            let moved = if grow {
                let boundary = self.boundary();
                boundary.choose(rng).map(|&v| {
                    self.add(v);
                    (v, true)
                })
            } else {
                let &v = self.members.choose(rng).expect("nonempty");
                self.removable(v).then(|| {
                    self.remove(v);
                    (v, false)
                })
            };
            let Some((v, added)) = moved else { continue };
            let proposed = self.energy(window);
            let accept = proposed <= energy || rng.random::<f64>() < ((energy - proposed) / temperature).exp();
            if accept {
                energy = proposed;
                self.record(best, window);
            } else if added {
                self.remove(v);
            } else {
                self.add(v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conductance::{cut_stats, phi_in_window, Mode};
    use crate::graph::{cycle, sample_small_world, GraphSpec};

    #[test]
    fn finds_the_arc_optimum_on_a_cycle() {
        let g = cycle(20).unwrap();
        let w = VolumeWindow::dyadic(20, 2);
        let (phi, set) = LocalSearch::with_seed(1).run(&g, &w, 0).unwrap();
        assert_eq!(phi, Phi { cut: 1, volume: 5 });
        assert!(g.is_connected_subset(&set));
    }

    #[test]
    fn witnesses_are_valid_and_dominate_exact() {
        let g = sample_small_world(&GraphSpec::with_integer_c(16, 1, 3, 4).unwrap()).unwrap();
        for i in 1..=5 {
            let w = VolumeWindow::dyadic(g.m(), i);
            let exact = phi_in_window(&g, w, &Mode::default()).unwrap();
            let heuristic = phi_in_window(&g, w, &Mode::LocalSearch(LocalSearch::with_seed(i as u64))).unwrap();
            assert!(!heuristic.certified || w.is_empty());
            match (exact.phi, heuristic.phi) {
                (Some(e), Some(h)) => {
                    assert!(h >= e);
                    let set = heuristic.witness.unwrap();
                    let stats = cut_stats(&g, &set).unwrap();
                    assert!(g.is_connected_subset(&set) && w.contains(stats.volume, set.len()));
                    assert_eq!(stats.phi(), h);
                }
                (None, h) => assert!(h.is_none()),
                (Some(_), None) => {}
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let g = sample_small_world(&GraphSpec::with_integer_c(30, 1, 2, 4).unwrap()).unwrap();
        let w = VolumeWindow::dyadic(g.m(), 2);
        let search = LocalSearch { restarts: 4, iterations: 500, ..LocalSearch::with_seed(7) };
        assert_eq!(search.run(&g, &w, 3), search.run(&g, &w, 3));
    }
}
