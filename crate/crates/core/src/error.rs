use std::io;

use thiserror::Error;

/// Errors produced by graph construction, clustering and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node index out of range: edge ({i}, {j}) in a graph with {n} nodes")]
    InvalidIndex { i: usize, j: usize, n: usize },

    #[error("invalid edge weight {w} on ({i}, {j}); weights must be finite and nonnegative")]
    InvalidWeight { i: usize, j: usize, w: f64 },

    #[error("node {0} is isolated (degree 0)")]
    IsolatedNode(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("asymmetric input: entry ({i}, {j}) has no equal mirrored entry")]
    AsymmetricInput { i: usize, j: usize },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("feature matrix needs at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("non-finite feature value at sample {row}, column {col}")]
    NonFiniteFeature { row: usize, col: usize },

    #[error("neighbor count {k} must be in [1, {max}]")]
    KTooLarge { k: usize, max: usize },

    #[error("bandwidth of node {0} is zero (duplicate samples); deduplicate the input or raise k-sigma")]
    ZeroSigma(usize),

    #[error("label {label} at node {node} is out of range for {c} clusters")]
    LabelOutOfRange { node: usize, label: usize, c: usize },

    #[error("cluster {0} is empty")]
    EmptyCluster(usize),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("node {0} has no positive similarity to any other node")]
    AllZeroRow(usize),

    #[error("target cluster count {c} exceeds the {max} clusters available")]
    TargetTooLarge { c: usize, max: usize },

    #[error("need at least 3 candidate cluster counts, got {0}")]
    TooFewCandidates(usize),

    #[error("invalid candidate list: {0}")]
    InvalidCandidates(String),

    #[error("instance too large for exhaustive search: {c}^{n} labelings exceeds the limit")]
    InstanceTooLarge { n: usize, c: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True for malformed or inconsistent input (files, lengths, indices),
    /// false for well-formed input the algorithms cannot process.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidIndex { .. }
                | Error::InvalidWeight { .. }
                | Error::Parse { .. }
                | Error::AsymmetricInput { .. }
                | Error::Io(_)
                | Error::NonFiniteFeature { .. }
                | Error::LengthMismatch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
