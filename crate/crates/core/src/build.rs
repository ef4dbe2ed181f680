//! Similarity graphs from feature vectors.
//!
//! Nodes are joined to their `k` nearest neighbors (exact Euclidean search)
//! with the self-tuning Gaussian affinity
//! `w_ij = exp(−‖x_i − x_j‖² / (σ_i σ_j))`, where `σ_i` is the distance from
//! `x_i` to its `k_sigma`-th nearest neighbor. The directed k-NN affinities
//! are averaged into a symmetric graph, a missing direction counting as 0.

use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::SparseSymGraph;

pub const DEFAULT_K_GRAPH: usize = 10;
pub const DEFAULT_K_SIGMA: usize = 7;

/// Dense row-major `n × d` matrix of finite features.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    n: usize,
    d: usize,
    values: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(n: usize, d: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * d {
            return Err(Error::LengthMismatch {
                expected: n * d,
                got: values.len(),
            });
        }
        if n < 2 {
            return Err(Error::TooFewSamples(n));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteFeature {
                row: pos / d,
                col: pos % d,
            });
        }
        Ok(FeatureMatrix { n, d, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(rows.len() * d);
        for row in rows {
            if row.len() != d {
                return Err(Error::LengthMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(rows.len(), d, values)
    }

    /// Reads a CSV file with one sample per row.
    pub fn read_csv(path: impl AsRef<Path>, has_header: bool) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(has_header)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(csv_error)?;
        let mut values = Vec::new();
        let mut d = None;
        let mut n = 0;
        for record in reader.records() {
            let record = record.map_err(csv_error)?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            if record.len() == 1 && record[0].is_empty() {
                continue;
            }
            match d {
                None => d = Some(record.len()),
                Some(d) if d != record.len() => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("expected {d} fields, found {}", record.len()),
                    })
                }
                _ => {}
            }
            for field in record.iter() {
                let v: f64 = field.parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("'{field}' is not a number"),
                })?;
                values.push(v);
            }
            n += 1;
        }
        Self::new(n, d.unwrap_or(0), values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    fn squared_distance(&self, i: usize, j: usize) -> f64 {
        self.row(i)
            .iter()
            .zip(self.row(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

fn csv_error(err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line() as usize);
    match err.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => Error::Parse {
            line,
            msg: format!("expected {expected_len} fields, found {len}"),
        },
        other => Error::Parse {
            line,
            msg: format!("{other:?}"),
        },
    }
}

/// Exact `k` nearest neighbors of every sample, as `(neighbor, distance)`
/// sorted by distance with ties broken by lower index.
pub fn knn_index(features: &FeatureMatrix, k: usize) -> Result<Vec<Vec<(usize, f64)>>> {
    let n = features.n();
    if k == 0 || k > n - 1 {
        return Err(Error::KTooLarge { k, max: n - 1 });
    }
    let lists = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut cand: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (features.squared_distance(i, j), j))
                .collect();
            let by_distance = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
            if k < cand.len() {
                cand.select_nth_unstable_by(k - 1, by_distance);
                cand.truncate(k);
            }
            cand.sort_unstable_by(by_distance);
            cand.into_iter().map(|(d2, j)| (j, d2.sqrt())).collect()
        })
        .collect();
    Ok(lists)
}

/// Self-tuning k-NN affinity graph.
///
/// Fails with [`Error::ZeroSigma`] when a sample's `k_sigma`-th neighbor is
/// at distance zero.
pub fn self_tuning_affinity(features: &FeatureMatrix, k_graph: usize, k_sigma: usize) -> Result<SparseSymGraph> {
    let n = features.n();
    for k in [k_graph, k_sigma] {
        if k == 0 || k > n - 1 {
            return Err(Error::KTooLarge { k, max: n - 1 });
        }
    }
    let knn = knn_index(features, k_graph.max(k_sigma))?;
    let sigma: Vec<f64> = knn.iter().map(|list| list[k_sigma - 1].1).collect();
    if let Some(i) = sigma.iter().position(|&s| s == 0.0) {
        return Err(Error::ZeroSigma(i));
    }

    // each directed affinity contributes half, so a pair listed from both
    // sides ends up with the average
    let mut edges = Vec::with_capacity(n * k_graph);
    for (i, list) in knn.iter().enumerate() {
        for &(j, dist) in &list[..k_graph] {
            let w = (-(dist * dist) / (sigma[i] * sigma[j])).exp();
            edges.push((i, j, 0.5 * w));
        }
    }
    SparseSymGraph::from_edges(n, &edges)
}
