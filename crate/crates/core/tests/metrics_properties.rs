use fastcd::metrics::{accuracy, ari, nmi};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn labels(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..k, n)
}

fn permute(labels: &[usize], perm: &[usize]) -> Vec<usize> {
    labels.iter().map(|&l| perm[l]).collect()
}

/// Accuracy by trying every injective matching.
fn brute_accuracy(pred: &[usize], truth: &[usize], k: usize) -> f64 {
    let mut best = 0;
    let mut perm: Vec<usize> = (0..k).collect();
    permutations(&mut perm, 0, &mut |p| {
        let hits = pred.iter().zip(truth).filter(|(a, b)| p[**a] == **b).count();
        best = best.max(hits);
    });
    best as f64 / pred.len() as f64
}

fn permutations(v: &mut Vec<usize>, start: usize, f: &mut dyn FnMut(&[usize])) {
    if start == v.len() {
        f(v);
        return;
    }
    for i in start..v.len() {
        v.swap(start, i);
        permutations(v, start + 1, f);
        v.swap(start, i);
    }
}

proptest! {
    #[test]
    fn permutation_invariance(p in labels(30, 4), t in labels(30, 4), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pp: Vec<usize> = (0..4).collect();
        let mut tp: Vec<usize> = (0..4).collect();
        pp.shuffle(&mut rng);
        tp.shuffle(&mut rng);
        let (p2, t2) = (permute(&p, &pp), permute(&t, &tp));
        prop_assert!((accuracy(&p, &t).unwrap() - accuracy(&p2, &t2).unwrap()).abs() < 1e-15);
        prop_assert!((nmi(&p, &t).unwrap() - nmi(&p2, &t2).unwrap()).abs() < 1e-12);
        prop_assert!((ari(&p, &t).unwrap() - ari(&p2, &t2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn symmetry_and_bounds(p in labels(25, 3), t in labels(25, 5)) {
        prop_assert!((nmi(&p, &t).unwrap() - nmi(&t, &p).unwrap()).abs() < 1e-12);
        prop_assert!((ari(&p, &t).unwrap() - ari(&t, &p).unwrap()).abs() < 1e-12);
        let acc = accuracy(&p, &t).unwrap();
        prop_assert!((0.0..=1.0).contains(&acc));
        prop_assert!((0.0..=1.0).contains(&nmi(&p, &t).unwrap()));
        prop_assert!(ari(&p, &t).unwrap() <= 1.0);
        // a constant prediction can match the largest true cluster
        let mut counts = [0usize; 5];
        t.iter().for_each(|&l| counts[l] += 1);
        let share = *counts.iter().max().unwrap() as f64 / t.len() as f64;
        prop_assert!(accuracy(&vec![0; t.len()], &t).unwrap() >= share - 1e-15);
    }

    #[test]
    fn self_comparison_is_perfect(p in labels(20, 4)) {
        prop_assume!(p.iter().any(|&l| l != p[0]));
        prop_assert_eq!(accuracy(&p, &p).unwrap(), 1.0);
        prop_assert!((nmi(&p, &p).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!((ari(&p, &p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn accuracy_matches_brute_force(p in labels(16, 4), t in labels(16, 4)) {
        prop_assert!((accuracy(&p, &t).unwrap() - brute_accuracy(&p, &t, 4)).abs() < 1e-15);
    }
}

#[test]
fn ari_null_mean_near_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trials = 1000;
    let mut total = 0.0;
    for _ in 0..trials {
        let p: Vec<usize> = (0..50).map(|_| rng.gen_range(0..3)).collect();
        let t: Vec<usize> = (0..50).map(|_| rng.gen_range(0..3)).collect();
        total += ari(&p, &t).unwrap();
    }
    let mean = total / trials as f64;
    assert!(mean.abs() < 0.05, "mean ARI {mean}");
}
