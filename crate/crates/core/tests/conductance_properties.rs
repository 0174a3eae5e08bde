mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use nwmix::conductance::{
    count_connected_sets, cut_stats, for_each_connected_set, fr_bound, phi_in_window, LocalSearch, Mode, SetQuery,
    VolumeWindow, DEFAULT_BUDGET,
};
use nwmix::graph::{sample_small_world, Graph, GraphSpec};

fn small_world() -> impl Strategy<Value = Graph> {
    (5usize..13, 0u64..5, any::<u64>())
        .prop_map(|(n, c, seed)| sample_small_world(&GraphSpec::with_integer_c(n, 1, c.min(n as u64), seed).unwrap()).unwrap())
}

proptest! {
    #[test]
    fn enumeration_matches_bitmask_oracle(g in small_world(), v in 0usize..5) {
        let masks = common::all_connected_masks(&g);
        for size in 1..=g.n() {
            let expect = masks.iter().filter(|m| m.count_ones() as usize == size).count() as u64;
            prop_assert_eq!(count_connected_sets(&g, size, None, DEFAULT_BUDGET).unwrap(), expect);
            let through = masks.iter().filter(|m| m.count_ones() as usize == size && *m >> v & 1 == 1).count() as u64;
            prop_assert_eq!(count_connected_sets(&g, size, Some(v), DEFAULT_BUDGET).unwrap(), through);
        }
    }

    #[test]
    fn each_set_is_visited_once_with_correct_stats(g in small_world()) {
        let mut seen = std::collections::HashSet::new();
        let query = SetQuery { min_size: 1, ..SetQuery::of_size(g.n()) };
        for_each_connected_set(&g, &query, |view| {
            let sorted = view.sorted();
            let stats = cut_stats(&g, &sorted).unwrap();
            assert_eq!((stats.cut, stats.volume), (view.cut(), view.volume));
            assert!(seen.insert(sorted));
        })
        .unwrap();
        prop_assert_eq!(seen.len(), common::all_connected_masks(&g).len());
    }

    #[test]
    fn exact_window_minimum_matches_oracle(g in small_world(), lo in 1usize..20, width in 0usize..20) {
        let masks = common::all_connected_masks(&g);
        let window = VolumeWindow { lo, hi: lo + width, max_size: usize::MAX };
        let entry = phi_in_window(&g, window, &Mode::default()).unwrap();
        let brute = common::brute_min_phi(&g, &masks, lo, lo + width);
        prop_assert_eq!(entry.phi.map(|p| p.exact()), brute);
        if let (Some(phi), Some(w)) = (entry.phi, &entry.witness) {
            let stats = cut_stats(&g, w).unwrap();
            prop_assert!(g.is_connected_subset(w));
            prop_assert_eq!(stats.phi(), phi);
        }
    }

    #[test]
    fn local_search_never_beats_exact(g in small_world(), seed in any::<u64>()) {
        let exact = fr_bound(&g, &Mode::default()).unwrap();
        let heuristic = fr_bound(&g, &Mode::LocalSearch(LocalSearch { restarts: 4, iterations: 500, ..LocalSearch::with_seed(seed) })).unwrap();
        for (e, h) in exact.profile.entries.iter().zip(&heuristic.profile.entries) {
            if let (Some(best), Some(found)) = (e.phi, h.phi) {
                prop_assert!(found >= best);
                let w = h.witness.as_ref().unwrap();
                prop_assert!(g.is_connected_subset(w));
                prop_assert!(h.window.contains(cut_stats(&g, w).unwrap().volume, w.len()));
            }
            prop_assert!(!h.certified || h.window.is_empty());
        }
    }

    #[test]
    fn fr_sum_is_sum_of_inverse_squares(g in small_world()) {
        let fr = fr_bound(&g, &Mode::default()).unwrap();
        let mut sum = BigRational::from_integer(BigInt::from(0));
        for e in &fr.profile.entries {
            if let Some(p) = e.phi {
                let r = BigRational::new(BigInt::from(p.volume), BigInt::from(p.cut));
                sum += &r * &r;
            }
        }
        prop_assert_eq!(fr.sum_exact, Some(sum));
    }
}

#[test]
fn budget_is_enforced() {
    let g = Graph::complete(12);
    assert!(count_connected_sets(&g, 6, None, 100).unwrap_err().is_budget());
}
