//! Cluster-count estimation from gaps in the normalized-cut objective.
//!
//! The graph is clustered at each candidate count and the objective `J_i` of
//! each result recorded. The objective grows quickly while clusters still mix
//! ground-truth groups and flattens once they match, so the chosen count is
//! the interior candidate that maximizes
//! `(J_i − J_{i−1}) / max(J_{i+1} − J_i, ε)`.

use std::io::Write;

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::SparseSymGraph;
use crate::n2hi::{build_hierarchy, initialize_from};
use crate::solver::{solve, SolverConfig};
use crate::fmt12;

const GAP_EPS: f64 = 1e-12;

/// Objectives for an ascending list of candidate cluster counts.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    pub candidates: Vec<usize>,
    pub objectives: Vec<f64>,
    /// `gaps[i] = objectives[i + 1] − objectives[i]`.
    pub gaps: Vec<f64>,
}

impl GapProfile {
    pub fn new(candidates: Vec<usize>, objectives: Vec<f64>) -> Result<Self> {
        validate_candidates(&candidates)?;
        if objectives.len() != candidates.len() {
            return Err(Error::LengthMismatch {
                expected: candidates.len(),
                got: objectives.len(),
            });
        }
        if objectives.iter().any(|j| !j.is_finite()) {
            return Err(Error::InvalidCandidates("objectives must be finite".into()));
        }
        let gaps = objectives.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(GapProfile {
            candidates,
            objectives,
            gaps,
        })
    }

    /// Writes `c,J,gap` rows; the first row has an empty gap.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "c,J,gap")?;
        for (i, (&c, &j)) in self.candidates.iter().zip(&self.objectives).enumerate() {
            match i.checked_sub(1).map(|p| self.gaps[p]) {
                Some(gap) => writeln!(out, "{c},{},{}", fmt12(j), fmt12(gap))?,
                None => writeln!(out, "{c},{},", fmt12(j))?,
            }
        }
        Ok(())
    }
}

fn validate_candidates(candidates: &[usize]) -> Result<()> {
    if candidates.iter().any(|&c| c < 2) {
        return Err(Error::InvalidCandidates("candidates must be at least 2".into()));
    }
    if candidates.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidCandidates("candidates must be strictly ascending".into()));
    }
    Ok(())
}

/// Clusters `graph` at every candidate count (N²HI start, then the solver)
/// and records the resulting objectives.
pub fn profile(graph: &SparseSymGraph, candidates: &[usize], config: &SolverConfig) -> Result<GapProfile> {
    validate_candidates(candidates)?;
    let hierarchy = build_hierarchy(graph);
    let objectives = candidates
        .par_iter()
        .map(|&c| {
            let init = initialize_from(&hierarchy, c)?;
            Ok(solve(graph, &init, config)?.objective)
        })
        .collect::<Result<Vec<f64>>>()?;
    let profile = GapProfile::new(candidates.to_vec(), objectives)?;
    if let Some(i) = profile.gaps.iter().position(|&g| g < 0.0) {
        warn!(
            "objective decreases from c={} to c={}",
            profile.candidates[i],
            profile.candidates[i + 1]
        );
    }
    Ok(profile)
}

/// Interior candidate with the largest gap ratio; ties go to the smaller
/// count.
pub fn select(profile: &GapProfile) -> Result<usize> {
    let tau = profile.candidates.len();
    if tau < 3 {
        return Err(Error::TooFewCandidates(tau));
    }
    let mut best = 1;
    let mut best_ratio = f64::NEG_INFINITY;
    for i in 1..tau - 1 {
        let ratio = profile.gaps[i - 1] / profile.gaps[i].max(GAP_EPS);
        if ratio > best_ratio {
            best = i;
            best_ratio = ratio;
        }
    }
    Ok(profile.candidates[best])
}
