//! External clustering quality: accuracy, NMI and ARI.
//!
//! All three are computed from the contingency table of the two labelings
//! and are invariant under renaming the clusters on either side.

use std::collections::HashMap;

use pathfinding::prelude::{kuhn_munkres, Matrix};

use crate::error::{Error, Result};

/// Counts `n_ij` of items in predicted cluster `i` and true cluster `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Contingency {
    pub table: Vec<Vec<usize>>,
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
    pub n: usize,
}

impl Contingency {
    pub fn new(pred: &[usize], truth: &[usize]) -> Result<Self> {
        if pred.len() != truth.len() {
            return Err(Error::LengthMismatch {
                expected: truth.len(),
                got: pred.len(),
            });
        }
        let rows = dense_ids(pred);
        let cols = dense_ids(truth);
        let r = rows.iter().max().map_or(0, |&m| m + 1);
        let s = cols.iter().max().map_or(0, |&m| m + 1);
        let mut table = vec![vec![0usize; s]; r];
        for (&i, &j) in rows.iter().zip(&cols) {
            table[i][j] += 1;
        }
        let row_sums = table.iter().map(|row| row.iter().sum()).collect();
        let col_sums = (0..s).map(|j| table.iter().map(|row| row[j]).sum()).collect();
        Ok(Contingency {
            table,
            row_sums,
            col_sums,
            n: pred.len(),
        })
    }
}

fn dense_ids(labels: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// Fraction of items correctly labeled under the best one-to-one matching of
/// predicted to true clusters.
pub fn accuracy(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let ct = Contingency::new(pred, truth)?;
    if ct.n == 0 {
        return Ok(1.0);
    }
    let size = ct.table.len().max(ct.col_sums.len());
    let weights = Matrix::from_fn(size, size, |(i, j)| {
        ct.table.get(i).and_then(|row| row.get(j)).map_or(0i64, |&v| v as i64)
    });
    let (matched, _) = kuhn_munkres(&weights);
    Ok(matched as f64 / ct.n as f64)
}

fn entropy(counts: &[usize], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information `I(U;V) / sqrt(H(U) H(V))`, natural log.
///
/// If either side has zero entropy the result is 0, except that two
/// single-cluster labelings score 1.
pub fn nmi(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let ct = Contingency::new(pred, truth)?;
    if ct.n == 0 {
        return Ok(1.0);
    }
    let n = ct.n as f64;
    let hu = entropy(&ct.row_sums, n);
    let hv = entropy(&ct.col_sums, n);
    if hu == 0.0 || hv == 0.0 {
        return Ok(if ct.row_sums.len() == 1 && ct.col_sums.len() == 1 {
            1.0
        } else {
            0.0
        });
    }
    let mut mi = 0.0;
    for (i, row) in ct.table.iter().enumerate() {
        for (j, &nij) in row.iter().enumerate() {
            if nij > 0 {
                let nij = nij as f64;
                mi += nij / n * (n * nij / (ct.row_sums[i] as f64 * ct.col_sums[j] as f64)).ln();
            }
        }
    }
    Ok((mi / (hu * hv).sqrt()).clamp(0.0, 1.0))
}

fn pairs(k: usize) -> f64 {
    let k = k as f64;
    k * (k - 1.0) / 2.0
}

/// Adjusted Rand index. Identical partitions score 1, independent ones 0 in
/// expectation.
pub fn ari(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let ct = Contingency::new(pred, truth)?;
    let index: f64 = ct.table.iter().flatten().map(|&v| pairs(v)).sum();
    let a: f64 = ct.row_sums.iter().map(|&v| pairs(v)).sum();
    let b: f64 = ct.col_sums.iter().map(|&v| pairs(v)).sum();
    let total = pairs(ct.n);
    if total == 0.0 {
        return Ok(1.0);
    }
    let expected = a * b / total;
    let max_index = 0.5 * (a + b);
    let denom = max_index - expected;
    if denom == 0.0 {
        // only reachable when both sides are the same trivial partition
        return Ok(1.0);
    }
    Ok((index - expected) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeled_is_perfect() {
        let (p, t) = ([0, 0, 1, 1], [1, 1, 0, 0]);
        assert_eq!(accuracy(&p, &t).unwrap(), 1.0);
        assert_eq!(nmi(&p, &t).unwrap(), 1.0);
        assert_eq!(ari(&p, &t).unwrap(), 1.0);
    }

    #[test]
    fn independent_halves() {
        let (p, t) = ([0, 0, 1, 1], [0, 1, 0, 1]);
        assert_eq!(accuracy(&p, &t).unwrap(), 0.5);
        assert_eq!(nmi(&p, &t).unwrap(), 0.0);
        assert!((ari(&p, &t).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn constant_prediction() {
        let (p, t) = ([0, 0, 0, 0], [0, 0, 1, 1]);
        assert_eq!(nmi(&p, &t).unwrap(), 0.0);
        assert_eq!(accuracy(&p, &t).unwrap(), 0.5);
        assert_eq!(nmi(&p, &p).unwrap(), 1.0);
        assert_eq!(ari(&p, &p).unwrap(), 1.0);
    }

    #[test]
    fn rectangular_tables() {
        let p = [0, 0, 1, 1, 2, 2];
        let t = [0, 0, 0, 1, 1, 1];
        assert!((accuracy(&p, &t).unwrap() - 4.0 / 6.0).abs() < 1e-15);
        assert!((accuracy(&t, &p).unwrap() - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(accuracy(&[0], &[0, 1]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(nmi(&[0], &[0, 1]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(ari(&[0], &[0, 1]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn contingency_marginals() {
        let ct = Contingency::new(&[3, 3, 7], &[1, 2, 2]).unwrap();
        assert_eq!(ct.table, vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(ct.row_sums, vec![2, 1]);
        assert_eq!(ct.col_sums, vec![1, 2]);
    }
}
