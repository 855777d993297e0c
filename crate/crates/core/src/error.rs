use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },

    #[error("line {line}: self-loop on vertex {v}")]
    SelfLoop { line: usize, v: usize },

    #[error("line {line}: negative weight {w} on edge ({u}, {v})")]
    NegativeWeight { line: usize, u: usize, v: usize, w: f64 },

    #[error("vertex {v} out of range for graph with {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },

    #[error("face {face}: expected a triangle, found a {sides}-gon")]
    NonTriangleFace { face: usize, sides: usize },

    #[error("face {face}: repeated vertex in triangle")]
    DegenerateFace { face: usize },

    #[error("scalar field does not belong to this graph (fingerprint {field:016x} vs {graph:016x})")]
    FingerprintMismatch { field: u64, graph: u64 },

    #[error("scalar field has {got} values, graph has {expected} vertices")]
    FieldLength { got: usize, expected: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("oracle scale exceeded: {n} vertices (limit {limit})")]
    ScaleExceeded { n: usize, limit: usize },

    #[error("diagram has {count} essential (infinite) points; finitize it first")]
    InfinitePoint { count: usize },

    #[error("wasserstein order must be >= 1, got {0}")]
    InvalidOrder(f64),

    #[error("matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NonSquare { rows: usize, row: usize, cols: usize },

    #[error("matrix is not symmetric at ({i}, {j})")]
    NonSymmetric { i: usize, j: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Numeric failures map to exit code 2, everything else is an input error.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. }
                | Error::NonSymmetric { .. }
                | Error::InfinitePoint { .. }
                | Error::InvalidOrder(_)
        )
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_numeric() {
            2
        } else {
            1
        }
    }
}
