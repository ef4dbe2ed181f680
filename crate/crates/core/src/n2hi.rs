//! Nearest-neighbor hierarchical initialization.
//!
//! Each layer links every node to its most similar neighbor, takes the
//! connected components of those links as clusters, and coarsens the graph so
//! that clusters become nodes with averaged cross-cluster similarity
//! `â_kl = (Σ_{i∈k, j∈l} a_ij) / (n_k n_l)`. Repeating until a single cluster
//! remains yields a hierarchy of partitions. An initial labeling with exactly
//! `c` clusters is read off the layer with `c` clusters, or obtained by
//! greedily merging the most similar pairs of the smallest layer that still
//! has more than `c` clusters.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::graph::{Csr, SparseSymGraph};
use crate::solver::Labeling;

/// One level of the hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    /// Partition of the previous layer's nodes.
    pub partition: Labeling,
    /// Coarsened graph whose nodes are the clusters of `partition`, with an
    /// empty diagonal.
    pub graph: Csr,
    /// Diagonal of the coarsened similarity, `s_k / n_k²`.
    pub intra_density: Vec<f64>,
    /// Nodes that had no positive similarity and were attached by the
    /// stall rule.
    pub stalled: Vec<usize>,
}

/// Ordered partitions from the first-neighbor layer down to one cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterHierarchy {
    base_n: usize,
    layers: Vec<Layer>,
}

impl ClusterHierarchy {
    pub fn base_n(&self) -> usize {
        self.base_n
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Cluster count of every layer, first layer first.
    pub fn cluster_counts(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.partition.c()).collect()
    }

    /// Labels of the base nodes under layer `level` (0-based).
    pub fn base_labels(&self, level: usize) -> Labeling {
        let mut labels: Vec<usize> = self.layers[0].partition.labels().to_vec();
        for layer in &self.layers[1..=level] {
            for l in labels.iter_mut() {
                *l = layer.partition.label(*l);
            }
        }
        Labeling::new(labels, self.layers[level].partition.c()).expect("composed labels in range")
    }
}

/// Most similar neighbor of every node, ties to the lowest index; `None` for
/// nodes without positive similarity.
pub fn first_neighbors(graph: &Csr) -> Vec<Option<usize>> {
    (0..graph.n())
        .map(|i| {
            let mut best: Option<(usize, f64)> = None;
            for (j, w) in graph.row(i) {
                if j == i || w <= 0.0 {
                    continue;
                }
                if best.is_none_or(|(_, bw)| w > bw) {
                    best = Some((j, w));
                }
            }
            best.map(|(j, _)| j)
        })
        .collect()
}

/// Components of the link relation, numbered by lowest member.
fn components(n: usize, links: impl IntoIterator<Item = (usize, usize)>) -> Labeling {
    let mut uf = UnionFind::<usize>::new(n);
    for (i, j) in links {
        uf.union(i, j);
    }
    let roots: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    Labeling::canonical(&roots)
}

/// Clusters of the first-neighbor relation: `i` and `j` share a cluster when
/// one is the other's most similar neighbor, closed transitively.
///
/// Fails with [`Error::AllZeroRow`] if some node has no positive similarity.
pub fn first_neighbor_partition(graph: &Csr) -> Result<Labeling> {
    let nn = first_neighbors(graph);
    if let Some(i) = nn.iter().position(Option::is_none) {
        return Err(Error::AllZeroRow(i));
    }
    Ok(components(graph.n(), nn.iter().enumerate().map(|(i, u)| (i, u.unwrap()))))
}

/// First-neighbor partition where nodes without neighbors join the lowest
/// indexed other cluster. Returns the partition and the attached nodes.
fn partition_with_stall_rule(graph: &Csr) -> (Labeling, Vec<usize>) {
    let nn = first_neighbors(graph);
    let stalled: Vec<usize> = (0..nn.len()).filter(|&i| nn[i].is_none()).collect();
    let links = nn
        .iter()
        .enumerate()
        .map(|(i, u)| (i, u.unwrap_or(if i == 0 { 1 } else { 0 })));
    (components(graph.n(), links), stalled)
}

/// Coarsened graph `â_kl = (Σ_{i∈k, j∈l} a_ij) / (n_k n_l)` for `k ≠ l`,
/// plus the diagonal `â_kk`.
pub fn coarsen(graph: &Csr, partition: &Labeling) -> (Csr, Vec<f64>) {
    let c = partition.c();
    let sizes = partition.sizes();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); c];
    for i in 0..graph.n() {
        members[partition.label(i)].push(i);
    }

    let mut diagonal = vec![0.0; c];
    let mut edges = Vec::new();
    let mut acc = vec![0.0; c];
    let mut touched = Vec::new();
    for k in 0..c {
        for &i in &members[k] {
            for (j, w) in graph.row(i) {
                let l = partition.label(j);
                if l == k {
                    diagonal[k] += w;
                } else if l > k {
                    if acc[l] == 0.0 {
                        touched.push(l);
                    }
                    acc[l] += w;
                }
            }
        }
        touched.sort_unstable();
        for &l in &touched {
            edges.push((k, l, acc[l] / (sizes[k] as f64 * sizes[l] as f64)));
            acc[l] = 0.0;
        }
        touched.clear();
        diagonal[k] /= (sizes[k] * sizes[k]) as f64;
    }
    let (csr, _) = Csr::from_undirected(c, &edges).expect("coarse edges are valid");
    (csr, diagonal)
}

/// Builds the full hierarchy down to one cluster.
pub fn build_hierarchy(graph: &SparseSymGraph) -> ClusterHierarchy {
    let mut layers = Vec::new();
    let mut current = graph.csr().clone();
    while current.n() > 1 {
        let (partition, stalled) = partition_with_stall_rule(&current);
        let (coarse, intra_density) = coarsen(&current, &partition);
        current = coarse.clone();
        layers.push(Layer {
            partition,
            graph: coarse,
            intra_density,
            stalled,
        });
    }
    ClusterHierarchy {
        base_n: graph.n(),
        layers,
    }
}

/// Merges the most similar pair of nodes of `graph` until `c` groups remain.
///
/// After merging `(u, v)` (ties to the lexicographically smallest pair),
/// every other node's similarity to the merged group becomes
/// `(a_iu + a_iv) / 2`, absent entries counting as 0. Returns labels over the
/// nodes of `graph`, numbered by first appearance.
pub fn refine(graph: &Csr, c: usize) -> Result<Labeling> {
    let m = graph.n();
    if c == 0 {
        return Err(Error::InvalidConfig("cluster count must be at least 1".into()));
    }
    if c > m {
        return Err(Error::TargetTooLarge { c, max: m });
    }
    let mut sims: Vec<BTreeMap<usize, f64>> = (0..m)
        .map(|i| graph.row(i).filter(|&(j, w)| j != i && w > 0.0).collect())
        .collect();
    let mut alive: BTreeSet<usize> = (0..m).collect();
    let mut merged_into: Vec<usize> = (0..m).collect();

    while alive.len() > c {
        let mut best: Option<(usize, usize, f64)> = None;
        for &u in &alive {
            for (&v, &w) in sims[u].range(u + 1..) {
                if best.is_none_or(|(_, _, bw)| w > bw) {
                    best = Some((u, v, w));
                }
            }
        }
        let (u, v) = match best {
            Some((u, v, _)) => (u, v),
            None => {
                let mut it = alive.iter();
                (*it.next().unwrap(), *it.next().unwrap())
            }
        };

        let v_row = std::mem::take(&mut sims[v]);
        let others: BTreeSet<usize> = sims[u]
            .keys()
            .chain(v_row.keys())
            .copied()
            .filter(|&i| i != u && i != v)
            .collect();
        for i in others {
            let a_iu = sims[u].get(&i).copied().unwrap_or(0.0);
            let a_iv = v_row.get(&i).copied().unwrap_or(0.0);
            let w = 0.5 * (a_iu + a_iv);
            sims[u].insert(i, w);
            sims[i].insert(u, w);
            sims[i].remove(&v);
        }
        sims[u].remove(&v);
        alive.remove(&v);
        merged_into[v] = u;
    }

    let roots: Vec<usize> = (0..m)
        .map(|mut i| {
            while merged_into[i] != i {
                i = merged_into[i];
            }
            i
        })
        .collect();
    Ok(Labeling::canonical(&roots))
}

/// Initial labeling of `graph` with exactly `c` nonempty clusters.
pub fn initialize(graph: &SparseSymGraph, c: usize) -> Result<Labeling> {
    initialize_from(&build_hierarchy(graph), c)
}

/// [`initialize`] from a prebuilt hierarchy.
pub fn initialize_from(hierarchy: &ClusterHierarchy, c: usize) -> Result<Labeling> {
    if c == 0 {
        return Err(Error::InvalidConfig("cluster count must be at least 1".into()));
    }
    let counts = hierarchy.cluster_counts();
    if c > counts[0] {
        return Err(Error::TargetTooLarge { c, max: counts[0] });
    }
    if let Some(level) = counts.iter().position(|&k| k == c) {
        return Ok(hierarchy.base_labels(level));
    }
    // counts strictly decrease to 1, so the bracketing layer exists
    let level = counts
        .windows(2)
        .position(|w| w[0] > c && c > w[1])
        .expect("bracketing layer");
    let refined = refine(&hierarchy.layers()[level].graph, c)?;
    let labels = hierarchy
        .base_labels(level)
        .labels()
        .iter()
        .map(|&l| refined.label(l))
        .collect();
    Labeling::new(labels, c)
}
