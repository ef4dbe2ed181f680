//! Seeded synthetic data for experiments and tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::build::FeatureMatrix;
use crate::error::{Error, Result};
use crate::graph::SparseSymGraph;

/// Dense diagonal blocks plus sparse uniform noise over all pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpec {
    pub blocks: usize,
    pub block_size: usize,
    /// Intra-block weights are uniform on `[lo, hi)`.
    pub intra: (f64, f64),
    /// Noise weights are uniform on `[lo, hi)`.
    pub noise: (f64, f64),
    /// Probability that a pair receives a noise edge.
    pub noise_density: f64,
}

impl Default for BlockSpec {
    /// Five blocks of 100 nodes, intra weights in `[0.5, 1)`, noise in
    /// `[0, 0.05)` at 2% density.
    fn default() -> Self {
        BlockSpec {
            blocks: 5,
            block_size: 100,
            intra: (0.5, 1.0),
            noise: (0.0, 0.05),
            noise_density: 0.02,
        }
    }
}

/// Block graph and its ground-truth block labels.
pub fn block_graph(spec: &BlockSpec, seed: u64) -> Result<(SparseSymGraph, Vec<usize>)> {
    if spec.blocks == 0 || spec.block_size < 2 {
        return Err(Error::InvalidConfig("need at least one block of two nodes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.blocks * spec.block_size;
    let truth: Vec<usize> = (0..n).map(|i| i / spec.block_size).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if truth[i] == truth[j] {
                edges.push((i, j, rng.gen_range(spec.intra.0..spec.intra.1)));
            }
            if rng.gen::<f64>() < spec.noise_density {
                edges.push((i, j, rng.gen_range(spec.noise.0..spec.noise.1)));
            }
        }
    }
    Ok((SparseSymGraph::from_edges(n, &edges)?, truth))
}

/// Sparse block graph with average degree about `degree`: each node draws
/// `degree / 2` partners, inside its own block with probability `p_in`.
pub fn sparse_block_graph(
    n: usize,
    blocks: usize,
    degree: usize,
    p_in: f64,
    seed: u64,
) -> Result<(SparseSymGraph, Vec<usize>)> {
    if blocks == 0 || n < 2 * blocks || degree < 2 {
        return Err(Error::InvalidConfig("need n >= 2 * blocks and degree >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block_size = n / blocks;
    let truth: Vec<usize> = (0..n).map(|i| (i / block_size).min(blocks - 1)).collect();
    let start = |b: usize| b * block_size;
    let end = |b: usize| if b == blocks - 1 { n } else { (b + 1) * block_size };
    let mut edges = Vec::with_capacity(n * degree / 2);
    for i in 0..n {
        for _ in 0..degree / 2 {
            let j = if rng.gen::<f64>() < p_in {
                rng.gen_range(start(truth[i])..end(truth[i]))
            } else {
                rng.gen_range(0..n)
            };
            if j != i {
                edges.push((i, j, rng.gen_range(0.5..1.0)));
            }
        }
    }
    Ok((SparseSymGraph::from_edges(n, &edges)?, truth))
}

/// Random graph with independent edges of probability `density` and
/// weights uniform on `[0.05, 1)`. Nodes left isolated are linked to a
/// random other node.
pub fn random_graph(n: usize, density: f64, seed: u64) -> Result<SparseSymGraph> {
    if n < 2 {
        return Err(Error::InvalidConfig("need at least 2 nodes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut degree = vec![0usize; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < density {
                edges.push((i, j, rng.gen_range(0.05..1.0)));
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    for i in 0..n {
        if degree[i] == 0 {
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            edges.push((i, j, rng.gen_range(0.05..1.0)));
            degree[i] += 1;
            degree[j] += 1;
        }
    }
    SparseSymGraph::from_edges(n, &edges)
}

/// Uniform random labeling of `n` nodes into `c` clusters with every cluster
/// nonempty.
pub fn random_labels(n: usize, c: usize, seed: u64) -> Vec<usize> {
    assert!(c >= 1 && c <= n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..c).chain((c..n).map(|_| rng.gen_range(0..c))).collect();
    labels.shuffle(&mut rng);
    labels
}

/// Two concentric circles (radii 1 and 2) of `points_per_circle` points each,
/// followed by `noise_points` uniform points in `[-2.5, 2.5]²`.
///
/// Truth labels: 0 inner circle, 1 outer circle, 2 noise.
pub fn two_circles(points_per_circle: usize, noise_points: usize, seed: u64) -> (FeatureMatrix, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(2 * points_per_circle + noise_points);
    let mut truth = Vec::with_capacity(rows.capacity());
    for (label, radius) in [(0, 1.0), (1, 2.0)] {
        for _ in 0..points_per_circle {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            rows.push(vec![radius * theta.cos(), radius * theta.sin()]);
            truth.push(label);
        }
    }
    for _ in 0..noise_points {
        rows.push(vec![rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5)]);
        truth.push(2);
    }
    let features = FeatureMatrix::from_rows(&rows).expect("finite generated features");
    (features, truth)
}
