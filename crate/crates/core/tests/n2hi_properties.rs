use fastcd::graph::Csr;
use fastcd::n2hi::{build_hierarchy, coarsen, initialize, ClusterHierarchy};
use fastcd::solver::Labeling;
use fastcd::synth::{random_graph, random_labels};
use fastcd::SparseSymGraph;
use proptest::prelude::*;

/// Averaged cross-cluster similarity by direct double sum.
fn brute_coarse(graph: &Csr, labels: &Labeling) -> Vec<Vec<f64>> {
    let c = labels.c();
    let mut out = vec![vec![0.0; c]; c];
    for i in 0..graph.n() {
        for j in 0..graph.n() {
            out[labels.label(i)][labels.label(j)] += graph.get(i, j);
        }
    }
    for k in 0..c {
        for l in 0..c {
            out[k][l] /= (labels.sizes()[k] * labels.sizes()[l]) as f64;
        }
    }
    out
}

fn assert_matches(coarse: &Csr, expected: &[Vec<f64>]) {
    for k in 0..coarse.n() {
        for l in 0..coarse.n() {
            let want = if k == l { 0.0 } else { expected[k][l] };
            assert!(
                (coarse.get(k, l) - want).abs() < 1e-12,
                "entry ({k},{l}): {} vs {want}",
                coarse.get(k, l)
            );
        }
    }
}

fn check_hierarchy(g: &SparseSymGraph, h: &ClusterHierarchy) {
    let counts = h.cluster_counts();
    assert!(counts.windows(2).all(|w| w[0] > w[1]), "{counts:?}");
    assert_eq!(*counts.last().unwrap(), 1);
    // each layer's coarse graph equals the brute-force average over the
    // previous layer's graph
    let mut prev = g.csr().clone();
    for layer in h.layers() {
        assert_matches(&layer.graph, &brute_coarse(&prev, &layer.partition));
        if layer.stalled.is_empty() {
            assert!(layer.partition.sizes().iter().all(|&s| s >= 2));
        }
        prev = layer.graph.clone();
    }
    // the first coarse graph also equals the average over base nodes
    assert_matches(&h.layers()[0].graph, &brute_coarse(g.csr(), &h.base_labels(0)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn coarsen_matches_brute_force(n in 3usize..12, k in 1usize..4, seed in any::<u64>()) {
        let g = random_graph(n, 0.5, seed).unwrap();
        let k = k.min(n);
        let labels = Labeling::new(random_labels(n, k, seed ^ 1), k).unwrap();
        let (coarse, diag) = coarsen(g.csr(), &labels);
        let expected = brute_coarse(g.csr(), &labels);
        assert_matches(&coarse, &expected);
        for (k, d) in diag.iter().enumerate() {
            prop_assert!((d - expected[k][k]).abs() < 1e-12);
        }
    }

    #[test]
    fn hierarchy_invariants(n in 2usize..40, density in 0.05f64..0.6, seed in any::<u64>()) {
        let g = random_graph(n, density, seed).unwrap();
        let h = build_hierarchy(&g);
        check_hierarchy(&g, &h);
        prop_assert_eq!(&h, &build_hierarchy(&g));

        let max_c = h.cluster_counts()[0];
        for c in 1..=max_c {
            let a = initialize(&g, c).unwrap();
            prop_assert_eq!(a.c(), c);
            prop_assert_eq!(a.nonempty_clusters(), c);
            prop_assert_eq!(&a, &initialize(&g, c).unwrap());
        }
        prop_assert!(initialize(&g, max_c + 1).is_err());
    }
}

#[test]
fn disconnected_graph_terminates() {
    let mut edges = Vec::new();
    for comp in 0..5 {
        let base = comp * 3;
        edges.push((base, base + 1, 1.0));
        edges.push((base + 1, base + 2, 0.5));
    }
    let g = SparseSymGraph::from_edges(15, &edges).unwrap();
    let h = build_hierarchy(&g);
    check_hierarchy(&g, &h);
    assert_eq!(h.cluster_counts()[0], 5);
    for c in 1..=5 {
        assert_eq!(initialize(&g, c).unwrap().nonempty_clusters(), c);
    }
}

#[test]
fn equal_cliques_cap_the_candidates() {
    use fastcd::select::profile;
    use fastcd::solver::SolverConfig;
    let mut edges = Vec::new();
    for base in [0, 3] {
        for i in 0..3 {
            for j in i + 1..3 {
                edges.push((base + i, base + j, 1.0));
            }
        }
    }
    edges.push((2, 3, 0.01));
    let g = SparseSymGraph::from_edges(6, &edges).unwrap();
    // each clique collapses to a single first-layer cluster
    assert_eq!(build_hierarchy(&g).cluster_counts()[0], 2);
    let err = profile(&g, &[2, 3, 4], &SolverConfig::default()).unwrap_err();
    assert!(matches!(err, fastcd::Error::TargetTooLarge { c: 3, max: 2 }), "{err:?}");
}

#[test]
fn selection_on_block_graphs() {
    use fastcd::select::{profile, select};
    use fastcd::solver::SolverConfig;
    use fastcd::synth::{block_graph, BlockSpec};
    let spec = BlockSpec {
        blocks: 3,
        block_size: 40,
        ..BlockSpec::default()
    };
    let (g, _) = block_graph(&spec, 11).unwrap();
    let candidates = [2, 3, 4, 5, 6];
    let p = profile(&g, &candidates, &SolverConfig::default()).unwrap();
    assert_eq!(select(&p).unwrap(), 3, "{p:?}");
    let scaled = profile(&g.scaled(7.5).unwrap(), &candidates, &SolverConfig::default()).unwrap();
    for (a, b) in p.objectives.iter().zip(&scaled.objectives) {
        assert!((a - b).abs() < 1e-12);
    }
    assert_eq!(select(&scaled).unwrap(), 3);

    let (g, _) = block_graph(&BlockSpec::default(), 0).unwrap();
    let p = profile(&g, &(2..=9).collect::<Vec<_>>(), &SolverConfig::default()).unwrap();
    assert!(p.gaps.iter().all(|&d| d >= 0.0), "{p:?}");
}
