use fastcd::n2hi::initialize;
use fastcd::oracle::{check_coordinatewise_optimal, exhaustive_best};
use fastcd::solver::{init_state, ncut_objective, solve, solve_observed, Labeling, MoveEvent, SolverConfig, SolverState};
use fastcd::synth::{random_graph, random_labels};
use fastcd::SparseSymGraph;
use proptest::prelude::*;

fn small_instance() -> impl Strategy<Value = (SparseSymGraph, usize, u64)> {
    (5usize..=9, 2usize..=3, any::<u64>(), 0.3f64..0.8).prop_map(|(n, c, seed, density)| {
        (random_graph(n, density, seed).unwrap(), c, seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_move_matches_recomputation((g, c, seed) in small_instance()) {
        let init = Labeling::new(random_labels(g.n(), c, seed), c).unwrap();
        let mut failures = Vec::new();
        let mut check = |ev: &MoveEvent, g: &SparseSymGraph, st: &SolverState, l: &Labeling| {
            let fresh = init_state(g, l).unwrap();
            for k in 0..l.c() {
                let ds = (st.s[k] - fresh.s[k]).abs();
                let dv = (st.v[k] - fresh.v[k]).abs();
                if ds > 1e-9 * fresh.s[k].abs().max(1.0) || dv > 1e-9 * fresh.v[k] {
                    failures.push(format!("aggregate drift at node {}", ev.node));
                }
            }
            let mut before = l.labels().to_vec();
            before[ev.node] = ev.from;
            let before = Labeling::new(before, l.c()).unwrap();
            let delta = ncut_objective(g, l) - ncut_objective(g, &before);
            if (delta - ev.gain).abs() > 1e-9 {
                failures.push(format!("gain {} vs recomputed {}", ev.gain, delta));
            }
            if ev.gain <= 0.0 {
                failures.push(format!("non-improving move {}", ev.gain));
            }
        };
        let res = solve_observed(&g, &init, &SolverConfig::default(), &mut check).unwrap();
        prop_assert!(failures.is_empty(), "{:?}", failures);
        prop_assert!(res.trace.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(res.trace[0] >= res.initial_objective);
        prop_assert_eq!(res.labels.nonempty_clusters(), c);
        prop_assert!(res.objective >= 0.0 && res.objective <= c as f64 + 1e-12, "objective {}", res.objective);
        let (ok, violation) = check_coordinatewise_optimal(&g, &res.labels);
        prop_assert!(ok, "not coordinate-wise optimal: {:?}", violation);
    }

    #[test]
    fn solver_never_beats_exhaustive((g, c, _seed) in small_instance()) {
        let oracle = exhaustive_best(&g, c).unwrap();
        prop_assert!((ncut_objective(&g, &oracle.best_labels) - oracle.best_objective).abs() < 1e-15);
        if let Ok(init) = initialize(&g, c) {
            let res = solve(&g, &init, &SolverConfig::default()).unwrap();
            prop_assert!(res.objective <= oracle.best_objective + 1e-12);
        }
    }

    #[test]
    fn objective_is_scale_free((g, c, seed) in small_instance(), scale in 0.01f64..100.0) {
        let l = Labeling::new(random_labels(g.n(), c, seed), c).unwrap();
        let scaled = g.scaled(scale).unwrap();
        prop_assert!((ncut_objective(&g, &l) - ncut_objective(&scaled, &l)).abs() < 1e-12);
    }

    #[test]
    fn solve_is_deterministic((g, c, seed) in small_instance()) {
        let l = Labeling::new(random_labels(g.n(), c, seed), c).unwrap();
        let a = solve(&g, &l, &SolverConfig::default()).unwrap();
        let b = solve(&g, &l, &SolverConfig::default()).unwrap();
        prop_assert_eq!(a.labels, b.labels);
        prop_assert_eq!(a.trace, b.trace);
        prop_assert_eq!(a.moves, b.moves);
    }
}

#[test]
fn adversarial_singletons_survive() {
    for seed in 0..50 {
        let g = random_graph(10, 0.5, seed).unwrap();
        // three singleton clusters next to one big cluster
        let mut labels = vec![0; 10];
        labels[3] = 1;
        labels[6] = 2;
        labels[9] = 3;
        let res = solve(&g, &Labeling::new(labels, 4).unwrap(), &SolverConfig::default()).unwrap();
        assert_eq!(res.labels.nonempty_clusters(), 4);
    }
}

#[test]
fn g4_optimum_is_strict_local_max() {
    let g = SparseSymGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 0.1), (2, 3, 1.0)]).unwrap();
    let l = Labeling::from_labels(vec![0, 0, 1, 1]);
    let st = init_state(&g, &l).unwrap();
    for m in 0..4 {
        let (b, d) = fastcd::solver::cluster_affinity(&g, &l, m);
        let p = l.label(m);
        let scores = fastcd::solver::score_candidates(&st, &b, d, p);
        for (k, &s) in scores.iter().enumerate() {
            if k != p {
                assert!(scores[p] > s, "node {m}: L({p})={} <= L({k})={s}", scores[p]);
            }
        }
    }
}
