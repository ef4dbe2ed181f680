//! Coordinate-descent maximization of the normalized-cut objective.
//!
//! For a labeling `Y` with columns `y_k`, the objective is
//! `J = Σ_k s_k / v_k` where `s_k = y_kᵀ A y_k` (twice the intra-cluster
//! weight) and `v_k = y_kᵀ D y_k` (the cluster volume). A sweep visits the
//! nodes in ascending order; for node `m` currently in cluster `p` it scores
//! every cluster `k` by the objective change `L(k)` of placing `m` in `k`
//! relative to removing it altogether:
//!
//! ```text
//! L(p)     = s_p / v_p − (s_p − 2 b_p) / (v_p − d_m)
//! L(k ≠ p) = (s_k + 2 b_k) / (v_k + d_m) − s_k / v_k
//! ```
//!
//! with `b_k = Σ_{j ∈ C_k} a_mj`. Moving `m` from `p` to `r` raises the
//! objective by exactly `L(r) − L(p)`. The `b` vector is rebuilt per node by
//! one scan of its neighbors, so a sweep costs `O(|E| + n·c)`.

use std::time::{Duration, Instant};

use log::debug;

use crate::error::{Error, Result};
use crate::graph::SparseSymGraph;

/// A hard assignment of `n` nodes to `c` clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<usize>,
    c: usize,
    sizes: Vec<usize>,
}

impl Labeling {
    /// Wraps `labels` as an assignment to `c` clusters. Clusters may be empty.
    pub fn new(labels: Vec<usize>, c: usize) -> Result<Self> {
        let mut sizes = vec![0usize; c];
        for (node, &label) in labels.iter().enumerate() {
            if label >= c {
                return Err(Error::LabelOutOfRange { node, label, c });
            }
            sizes[label] += 1;
        }
        Ok(Labeling { labels, c, sizes })
    }

    /// Uses `max(label) + 1` as the cluster count.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let c = labels.iter().max().map_or(0, |&m| m + 1);
        Self::new(labels, c).expect("labels bounded by their maximum")
    }

    /// Relabels clusters `0, 1, ...` in order of first appearance.
    pub fn canonical(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let relabeled: Vec<usize> = labels
            .iter()
            .map(|&l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Self::new(relabeled, map.len()).expect("canonical labels are dense")
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<usize> {
        self.labels
    }

    #[inline]
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of cluster slots, including empty ones.
    pub fn c(&self) -> usize {
        self.c
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn nonempty_clusters(&self) -> usize {
        self.sizes.iter().filter(|&&s| s > 0).count()
    }

    fn first_empty(&self) -> Option<usize> {
        self.sizes.iter().position(|&s| s == 0)
    }

    fn relabel(&mut self, node: usize, to: usize) {
        let from = self.labels[node];
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
        self.labels[node] = to;
    }
}

/// Per-cluster aggregates maintained across moves.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    /// `s_k = y_kᵀ A y_k`.
    pub s: Vec<f64>,
    /// `v_k = y_kᵀ D y_k`.
    pub v: Vec<f64>,
    pub sizes: Vec<usize>,
    pub objective: f64,
    /// Objective after each completed sweep.
    pub trace: Vec<f64>,
    /// Accepted moves in each completed sweep.
    pub moves: Vec<usize>,
}

impl SolverState {
    /// Objective recomputed from the aggregates.
    pub fn objective_from_aggregates(&self) -> f64 {
        self.s.iter().zip(&self.v).map(|(&s, &v)| ratio(s, v)).sum()
    }
}

#[inline]
fn ratio(s: f64, v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        s / v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Cap on outer sweeps.
    pub max_outer: usize,
    /// Stop once a sweep raises the objective by less than this fraction.
    pub rel_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_outer: 100,
            rel_tol: 1e-9,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_outer == 0 {
            return Err(Error::InvalidConfig("max_outer must be at least 1".into()));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// Outcome of [`solve`].
#[derive(Debug, Clone)]
pub struct ClusterResult {
    pub labels: Labeling,
    pub objective: f64,
    pub initial_objective: f64,
    /// Objective after each sweep; nondecreasing.
    pub trace: Vec<f64>,
    /// Accepted moves per sweep.
    pub moves: Vec<usize>,
    /// True when the run stopped on the tolerance or a move-free sweep
    /// rather than on `max_outer`.
    pub converged: bool,
    pub elapsed: Duration,
}

impl ClusterResult {
    pub fn sweeps(&self) -> usize {
        self.trace.len()
    }

    pub fn total_moves(&self) -> usize {
        self.moves.iter().sum()
    }
}

/// Normalized-cut objective `Σ_k (y_kᵀ A y_k) / (y_kᵀ D y_k)` evaluated from
/// scratch, with empty clusters contributing 0.
pub fn ncut_objective(graph: &SparseSymGraph, labeling: &Labeling) -> f64 {
    let mut within = vec![0.0; labeling.c()];
    let mut volume = vec![0.0; labeling.c()];
    for i in 0..graph.n() {
        let k = labeling.label(i);
        for (j, w) in graph.neighbors(i) {
            volume[k] += w;
            if labeling.label(j) == k {
                within[k] += w;
            }
        }
    }
    within.iter().zip(&volume).map(|(&s, &v)| ratio(s, v)).sum()
}

/// Computes the aggregates for `labeling` from scratch.
///
/// Fails with [`Error::EmptyCluster`] if any cluster has no members.
pub fn init_state(graph: &SparseSymGraph, labeling: &Labeling) -> Result<SolverState> {
    if labeling.n() != graph.n() {
        return Err(Error::LengthMismatch {
            expected: graph.n(),
            got: labeling.n(),
        });
    }
    if let Some(k) = labeling.first_empty() {
        return Err(Error::EmptyCluster(k));
    }
    let c = labeling.c();
    let mut s = vec![0.0; c];
    let mut v = vec![0.0; c];
    for m in 0..graph.n() {
        let k = labeling.label(m);
        v[k] += graph.degree(m);
        s[k] += graph
            .neighbors(m)
            .filter(|&(j, _)| labeling.label(j) == k)
            .map(|(_, w)| w)
            .sum::<f64>();
    }
    let mut state = SolverState {
        s,
        v,
        sizes: labeling.sizes().to_vec(),
        objective: 0.0,
        trace: Vec::new(),
        moves: Vec::new(),
    };
    state.objective = state.objective_from_aggregates();
    Ok(state)
}

/// Fills `b[k] = Σ_{j ∈ C_k} a_mj` by one scan of `m`'s neighbors and returns
/// `d_m`. `b` must have length `c`.
pub fn cluster_affinity_into(
    graph: &SparseSymGraph,
    labeling: &Labeling,
    m: usize,
    b: &mut [f64],
) -> f64 {
    b.fill(0.0);
    for (j, w) in graph.neighbors(m) {
        b[labeling.label(j)] += w;
    }
    graph.degree(m)
}

/// Allocating form of [`cluster_affinity_into`].
pub fn cluster_affinity(graph: &SparseSymGraph, labeling: &Labeling, m: usize) -> (Vec<f64>, f64) {
    let mut b = vec![0.0; labeling.c()];
    let d = cluster_affinity_into(graph, labeling, m, &mut b);
    (b, d)
}

/// Scores every cluster for a node of degree `d_m` currently in cluster `p`,
/// writing `L(k)` into `out`.
pub fn score_candidates_into(state: &SolverState, b: &[f64], d_m: f64, p: usize, out: &mut [f64]) {
    for k in 0..out.len() {
        let (s, v) = (state.s[k], state.v[k]);
        out[k] = if k == p {
            ratio(s, v) - ratio(s - 2.0 * b[k], v - d_m)
        } else {
            (s + 2.0 * b[k]) / (v + d_m) - ratio(s, v)
        };
    }
}

/// Allocating form of [`score_candidates_into`].
pub fn score_candidates(state: &SolverState, b: &[f64], d_m: f64, p: usize) -> Vec<f64> {
    let mut out = vec![0.0; b.len()];
    score_candidates_into(state, b, d_m, p, &mut out);
    out
}

/// Index of the best score. Ties keep `p`, then favor the lowest index.
#[inline]
fn best_candidate(scores: &[f64], p: usize) -> usize {
    let mut best = p;
    let mut best_score = scores[p];
    for (k, &score) in scores.iter().enumerate() {
        if score > best_score {
            best = k;
            best_score = score;
        }
    }
    best
}

/// Moves node `m` from cluster `p` to `r`, updating the aggregates.
///
/// `b` and `d_m` are the node's cluster affinities and degree; `gain` is
/// `L(r) − L(p)` and is added to the running objective.
pub fn apply_move(
    state: &mut SolverState,
    labeling: &mut Labeling,
    m: usize,
    p: usize,
    r: usize,
    b: &[f64],
    d_m: f64,
    gain: f64,
) {
    debug_assert_ne!(p, r);
    debug_assert_eq!(labeling.label(m), p);
    state.s[r] += 2.0 * b[r];
    state.v[r] += d_m;
    state.s[p] -= 2.0 * b[p];
    state.v[p] -= d_m;
    state.sizes[r] += 1;
    state.sizes[p] -= 1;
    state.objective += gain;
    labeling.relabel(m, r);
}

/// An accepted single-node move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveEvent {
    pub sweep: usize,
    pub node: usize,
    pub from: usize,
    pub to: usize,
    /// Predicted objective increase `L(to) − L(from)`.
    pub gain: f64,
    pub objective_before: f64,
}

/// Hook invoked after every accepted move, for verification runs.
pub trait MoveObserver {
    fn on_move(&mut self, event: &MoveEvent, graph: &SparseSymGraph, state: &SolverState, labeling: &Labeling);
}

impl MoveObserver for () {
    #[inline]
    fn on_move(&mut self, _: &MoveEvent, _: &SparseSymGraph, _: &SolverState, _: &Labeling) {}
}

impl<F> MoveObserver for F
where
    F: FnMut(&MoveEvent, &SparseSymGraph, &SolverState, &Labeling),
{
    fn on_move(&mut self, event: &MoveEvent, graph: &SparseSymGraph, state: &SolverState, labeling: &Labeling) {
        self(event, graph, state, labeling)
    }
}

/// Scratch buffers reused across rows.
struct Workspace {
    b: Vec<f64>,
    scores: Vec<f64>,
}

impl Workspace {
    fn new(c: usize) -> Self {
        Workspace {
            b: vec![0.0; c],
            scores: vec![0.0; c],
        }
    }
}

/// One pass over all nodes in ascending order. Returns the number of
/// accepted moves. Sole members of a cluster are never moved.
pub fn sweep(graph: &SparseSymGraph, state: &mut SolverState, labeling: &mut Labeling) -> usize {
    let mut ws = Workspace::new(labeling.c());
    sweep_with(graph, state, labeling, &mut ws, 0, &mut ())
}

fn sweep_with<O: MoveObserver>(
    graph: &SparseSymGraph,
    state: &mut SolverState,
    labeling: &mut Labeling,
    ws: &mut Workspace,
    sweep_index: usize,
    observer: &mut O,
) -> usize {
    let mut moved = 0;
    for m in 0..graph.n() {
        let p = labeling.label(m);
        if state.sizes[p] == 1 {
            continue;
        }
        let d_m = cluster_affinity_into(graph, labeling, m, &mut ws.b);
        score_candidates_into(state, &ws.b, d_m, p, &mut ws.scores);
        let r = best_candidate(&ws.scores, p);
        if r != p {
            let gain = ws.scores[r] - ws.scores[p];
            let objective_before = state.objective;
            apply_move(state, labeling, m, p, r, &ws.b, d_m, gain);
            moved += 1;
            let event = MoveEvent {
                sweep: sweep_index,
                node: m,
                from: p,
                to: r,
                gain,
                objective_before,
            };
            observer.on_move(&event, graph, state, labeling);
        }
    }
    moved
}

/// Runs sweeps from `initial` until the relative objective increase of a
/// sweep drops below `config.rel_tol`, a sweep makes no moves, or
/// `config.max_outer` sweeps have run.
pub fn solve(graph: &SparseSymGraph, initial: &Labeling, config: &SolverConfig) -> Result<ClusterResult> {
    solve_observed(graph, initial, config, &mut ())
}

/// [`solve`] with a callback after every accepted move.
pub fn solve_observed<O: MoveObserver>(
    graph: &SparseSymGraph,
    initial: &Labeling,
    config: &SolverConfig,
    observer: &mut O,
) -> Result<ClusterResult> {
    config.validate()?;
    let start = Instant::now();
    let mut labeling = initial.clone();
    let mut state = init_state(graph, &labeling)?;
    let initial_objective = state.objective;
    let mut ws = Workspace::new(labeling.c());
    let mut previous = initial_objective;
    let mut converged = false;

    for t in 0..config.max_outer {
        let moved = sweep_with(graph, &mut state, &mut labeling, &mut ws, t, observer);
        // resynchronize the running sum with the aggregates once per sweep
        state.objective = state.objective_from_aggregates();
        state.trace.push(state.objective);
        state.moves.push(moved);
        let rel_gain = (state.objective - previous) / previous.max(f64::MIN_POSITIVE);
        debug!(
            "sweep {}: objective {:.12} moves {} rel gain {:e}",
            t + 1,
            state.objective,
            moved,
            rel_gain
        );
        if moved == 0 || rel_gain < config.rel_tol {
            converged = true;
            break;
        }
        previous = state.objective;
    }

    Ok(ClusterResult {
        objective: state.objective,
        labels: labeling,
        initial_objective,
        trace: state.trace,
        moves: state.moves,
        converged,
        elapsed: start.elapsed(),
    })
}
