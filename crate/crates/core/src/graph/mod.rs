//! Sparse symmetric similarity graphs.
//!
//! [`SparseSymGraph`] is the validated input graph: symmetric, zero diagonal,
//! strictly positive weights, no isolated nodes. [`Csr`] is the bare storage
//! it is built on; coarsened graphs in the initializer use it directly because
//! they may legitimately contain empty rows.

mod mtx;

pub use mtx::{read_matrix_market, write_matrix_market};

use log::warn;

use crate::error::{Error, Result};

/// Compressed sparse row storage with ascending column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    weights: Vec<f64>,
}

impl Csr {
    /// Builds a symmetric CSR matrix from undirected edges.
    ///
    /// Each `(i, j, w)` is one undirected edge; entries naming the same
    /// unordered pair are summed in input order. Self loops and pairs whose
    /// summed weight is zero are dropped. Returns the matrix and the number of
    /// self loops dropped.
    pub fn from_undirected(n: usize, edges: &[(usize, usize, f64)]) -> Result<(Self, usize)> {
        let mut keyed = Vec::with_capacity(edges.len());
        let mut self_loops = 0;
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidIndex { i, j, n });
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight { i, j, w });
            }
            if i == j {
                self_loops += 1;
                continue;
            }
            keyed.push((i.min(j), i.max(j), w));
        }
        // stable: duplicates keep input order, so their sum is reproducible
        keyed.sort_by_key(|&(u, v, _)| (u, v));

        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(keyed.len());
        for (u, v, w) in keyed {
            match merged.last_mut() {
                Some(last) if last.0 == u && last.1 == v => last.2 += w,
                _ => merged.push((u, v, w)),
            }
        }
        merged.retain(|e| e.2 > 0.0);

        let mut counts = vec![0usize; n];
        for &(u, v, _) in &merged {
            counts[u] += 1;
            counts[v] += 1;
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        for c in &counts {
            row_ptr.push(row_ptr.last().unwrap() + c);
        }
        let nnz = row_ptr[n];
        let mut col_idx = vec![0usize; nnz];
        let mut weights = vec![0.0; nnz];
        let mut cursor = row_ptr[..n].to_vec();
        // pairs are sorted by (u, v) with u < v, so both the forward and the
        // mirrored insertions land in ascending column order
        for &(u, v, w) in &merged {
            col_idx[cursor[u]] = v;
            weights[cursor[u]] = w;
            cursor[u] += 1;
            col_idx[cursor[v]] = u;
            weights[cursor[v]] = w;
            cursor[v] += 1;
        }
        Ok((
            Csr {
                n,
                row_ptr,
                col_idx,
                weights,
            },
            self_loops,
        ))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored entries (each undirected edge counted twice).
    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Stored entries of row `i` in ascending column order.
    #[inline]
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn row_len(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    /// Weight of entry `(i, j)`, or 0 when absent.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(pos) => self.weights[range.start + pos],
            Err(_) => 0.0,
        }
    }

    /// Checks that every stored `(i, j, w)` has a mirrored `(j, i, w)` with
    /// bitwise equal weight.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            self.row(i)
                .all(|(j, w)| self.get(j, i).to_bits() == w.to_bits())
        })
    }
}

/// Symmetric, zero-diagonal weighted adjacency with cached degrees.
///
/// Invariants: every stored weight is positive, the diagonal is empty, the
/// matrix is exactly symmetric and every node has positive degree.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymGraph {
    csr: Csr,
    degrees: Vec<f64>,
    dropped_self_loops: usize,
}

impl SparseSymGraph {
    /// Builds a graph from undirected weighted edges.
    ///
    /// Duplicate pairs are summed and self loops are dropped (counted in
    /// [`dropped_self_loops`](Self::dropped_self_loops)).
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let (csr, dropped) = Csr::from_undirected(n, edges)?;
        if dropped > 0 {
            warn!("dropped {dropped} diagonal entries");
        }
        Self::from_csr(csr, dropped)
    }

    fn from_csr(csr: Csr, dropped_self_loops: usize) -> Result<Self> {
        let degrees: Vec<f64> = (0..csr.n()).map(|i| csr.row(i).map(|(_, w)| w).sum()).collect();
        if let Some(i) = degrees.iter().position(|&d| d <= 0.0) {
            return Err(Error::IsolatedNode(i));
        }
        Ok(SparseSymGraph {
            csr,
            degrees,
            dropped_self_loops,
        })
    }

    pub fn n(&self) -> usize {
        self.csr.n()
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.csr.nnz() / 2
    }

    pub fn csr(&self) -> &Csr {
        &self.csr
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    #[inline]
    pub fn degree(&self, i: usize) -> f64 {
        self.degrees[i]
    }

    /// Neighbors of `i` with their weights, ascending by neighbor index.
    ///
    /// Panics if `i >= n`.
    #[inline]
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        assert!(i < self.n(), "node {i} out of range for {} nodes", self.n());
        self.csr.row(i)
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.csr.get(i, j)
    }

    /// Sum of all degrees, i.e. twice the total undirected edge weight.
    pub fn volume(&self) -> f64 {
        self.degrees.iter().sum()
    }

    pub fn dropped_self_loops(&self) -> usize {
        self.dropped_self_loops
    }

    /// All undirected edges `(i, j, w)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n()).flat_map(move |i| {
            self.csr
                .row(i)
                .filter(move |&(j, _)| j > i)
                .map(move |(j, w)| (i, j, w))
        })
    }

    /// The same graph with every weight multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidConfig(format!("scale factor {factor} must be positive")));
        }
        let edges: Vec<_> = self.edges().map(|(i, j, w)| (i, j, w * factor)).collect();
        Self::from_edges(self.n(), &edges)
    }
}
