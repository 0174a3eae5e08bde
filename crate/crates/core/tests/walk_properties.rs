mod common;

use proptest::prelude::*;

use nwmix::graph::{build_ring, cycle, sample_small_world, Graph, GraphSpec};
use nwmix::walk::{
    escape_time, mixing_time, mixing_time_exact, simulate_walk, stationary, step, tv_distance, MixingOptions,
    ProbabilityVector, Starts,
};

fn small_world() -> impl Strategy<Value = Graph> {
    (5usize..14, 0u64..5, any::<u64>())
        .prop_map(|(n, c, seed)| sample_small_world(&GraphSpec::with_integer_c(n, 1, c.min(n as u64), seed).unwrap()).unwrap())
}

fn distribution(n: usize) -> impl Strategy<Value = ProbabilityVector> {
    proptest::collection::vec(0.0f64..1.0, n).prop_filter_map("non-zero mass", |w| {
        let total: f64 = w.iter().sum();
        (total > 1e-3).then(|| ProbabilityVector::new(w.iter().map(|x| x / total).collect()).unwrap())
    })
}

proptest! {
    #[test]
    fn steps_conserve_mass_and_fix_pi(g in small_world(), seed in any::<u64>()) {
        let pi = stationary(&g).unwrap();
        let moved = step(&g, &pi);
        prop_assert!(tv_distance(&moved, &pi).unwrap() < 1e-14);
        let mut mu = ProbabilityVector::point_mass(g.n(), (seed % g.n() as u64) as usize);
        let mut last = tv_distance(&mu, &pi).unwrap();
        for _ in 0..50 {
            mu = step(&g, &mu);
            prop_assert!((mu.total() - 1.0).abs() < 1e-12);
            let now = tv_distance(&mu, &pi).unwrap();
            prop_assert!(now <= last + 1e-12);
            last = now;
        }
    }

    #[test]
    fn step_is_a_contraction(pair in (5usize..12).prop_flat_map(|n| (distribution(n), distribution(n), Just(n))), seed in any::<u64>()) {
        let (mu, nu, n) = pair;
        let g = sample_small_world(&GraphSpec::with_integer_c(n, 1, 2, seed).unwrap()).unwrap();
        let before = tv_distance(&mu, &nu).unwrap();
        let after = tv_distance(&step(&g, &mu), &step(&g, &nu)).unwrap();
        prop_assert!(after <= before + 1e-12);
    }

    #[test]
    fn float_rational_and_dense_agree(g in small_world()) {
        let fast = mixing_time(&g, &Starts::All, MixingOptions::default()).unwrap();
        let exact = mixing_time_exact(&g, &Starts::All, 100_000).unwrap();
        let dense = common::dense_mixing_times(&g, 0.25, 100_000);
        let per: Vec<_> = fast.per_start.as_ref().unwrap().iter().map(|s| s.tau).collect();
        let per_exact: Vec<_> = exact.per_start.as_ref().unwrap().iter().map(|s| s.tau).collect();
        prop_assert_eq!(&per, &dense);
        prop_assert_eq!(&per, &per_exact);
    }

    #[test]
    fn sampled_starts_bound_tau_from_below(g in small_world(), seed in any::<u64>()) {
        let all = mixing_time(&g, &Starts::All, MixingOptions::default()).unwrap();
        let some = mixing_time(&g, &Starts::sampled(3, seed), MixingOptions::default()).unwrap();
        prop_assert!(some.tau.unwrap() <= all.tau.unwrap());
    }
}

#[test]
fn walk_is_lazy_and_moves_uniformly() {
    // Hold w.p. 1/2, otherwise each of the 4 neighbours w.p. 1/8: chi-square over 5 cells.
    let g = build_ring(21, 2).unwrap();
    let path = simulate_walk(&g, 0, 200_000, 3).unwrap();
    let mut counts = [0f64; 5];
    for w in path.windows(2) {
        let offset = (w[1] + 21 - w[0]) % 21;
        let cell = match offset {
            0 => 0,
            1 => 1,
            2 => 2,
            19 => 3,
            20 => 4,
            other => panic!("jump by {other}"),
        };
        counts[cell] += 1.0;
    }
    let total: f64 = counts.iter().sum();
    let expect = [0.5, 0.125, 0.125, 0.125, 0.125];
    let chi2: f64 = counts.iter().zip(expect).map(|(o, p)| (o - p * total).powi(2) / (p * total)).sum();
    // 99.9% quantile of chi-square with 4 degrees of freedom.
    assert!(chi2 < 18.47, "chi2 = {chi2}, counts {counts:?}");
}

#[test]
fn escape_time_scales_diffusively() {
    let g = cycle(400).unwrap();
    let median_escape = |len: usize| {
        let inside: Vec<usize> = (0..len).collect();
        let mut times: Vec<u64> =
            (0..801u64).map(|s| escape_time(&g, len / 2, &inside, s, 10_000_000).unwrap().steps()).collect();
        times.sort_unstable();
        times[times.len() / 2] as f64
    };
    let mut prev = median_escape(8);
    for len in [16, 32, 64] {
        let now = median_escape(len);
        let ratio = now / prev;
        assert!((2.5..=6.0).contains(&ratio), "L = {len}: ratio {ratio}");
        prev = now;
    }
}

#[test]
fn disconnected_graph_has_no_stationary_law() {
    let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
    assert!(stationary(&g).is_err());
}
