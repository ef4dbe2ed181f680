//! Brute-force references for small instances.

use crate::error::{Error, Result};
use crate::graph::SparseSymGraph;
use crate::solver::{ncut_objective, Labeling};

/// Largest `c^n` accepted by [`exhaustive_best`].
pub const MAX_LABELINGS: f64 = 1e7;

/// Tolerance for a single-node move to count as an improvement.
pub const IMPROVEMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_labels: Labeling,
    pub best_objective: f64,
    /// Number of canonical labelings evaluated.
    pub enumerated_count: usize,
}

/// Maximizes the objective over every labeling with exactly `c` nonempty
/// clusters.
///
/// Labelings are enumerated once per set partition as restricted growth
/// strings (first-appearance canonical form), in lexicographic order; the
/// first maximum wins.
pub fn exhaustive_best(graph: &SparseSymGraph, c: usize) -> Result<OracleResult> {
    let n = graph.n();
    if c == 0 {
        return Err(Error::InvalidConfig("cluster count must be at least 1".into()));
    }
    if c > n {
        return Err(Error::TargetTooLarge { c, max: n });
    }
    if (c as f64).powi(n as i32) > MAX_LABELINGS {
        return Err(Error::InstanceTooLarge { n, c });
    }

    let mut labels = vec![0usize; n];
    // labels[0] is always 0; `opened` counts clusters used by the prefix
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut count = 0usize;
    visit(graph, c, 1, &mut labels, 1, &mut best, &mut count);

    let (labels, objective) = best.expect("c <= n admits a labeling");
    Ok(OracleResult {
        best_labels: Labeling::new(labels, c)?,
        best_objective: objective,
        enumerated_count: count,
    })
}

fn visit(
    graph: &SparseSymGraph,
    c: usize,
    pos: usize,
    labels: &mut Vec<usize>,
    opened: usize,
    best: &mut Option<(Vec<usize>, f64)>,
    count: &mut usize,
) {
    let n = labels.len();
    if pos == n {
        if opened == c {
            *count += 1;
            let lab = Labeling::new(labels.clone(), c).expect("labels below c");
            let value = ncut_objective(graph, &lab);
            if best.as_ref().is_none_or(|(_, b)| value > *b) {
                *best = Some((labels.clone(), value));
            }
        }
        return;
    }
    // not enough positions left to open the remaining clusters
    if c - opened > n - pos {
        return;
    }
    for k in 0..=opened.min(c - 1) {
        labels[pos] = k;
        let next = if k == opened { opened + 1 } else { opened };
        visit(graph, c, pos + 1, labels, next, best, count);
    }
    labels[pos] = 0;
}

/// Checks that no single-node relabeling raises the objective by more than
/// [`IMPROVEMENT_TOL`]. Sole members of a cluster are not moved.
///
/// Returns `(true, None)` or `(false, Some((node, target)))` for the first
/// improving move in node-then-cluster order.
pub fn check_coordinatewise_optimal(graph: &SparseSymGraph, labeling: &Labeling) -> (bool, Option<(usize, usize)>) {
    let base = ncut_objective(graph, labeling);
    let mut labels = labeling.labels().to_vec();
    for m in 0..labels.len() {
        let p = labels[m];
        if labeling.sizes()[p] <= 1 {
            continue;
        }
        for k in (0..labeling.c()).filter(|&k| k != p) {
            labels[m] = k;
            let moved = Labeling::new(labels.clone(), labeling.c()).expect("in range");
            if ncut_objective(graph, &moved) > base + IMPROVEMENT_TOL {
                return (false, Some((m, k)));
            }
        }
        labels[m] = p;
    }
    (true, None)
}
