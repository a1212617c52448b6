use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mode permutation {order:?} for an order-{expected} tensor")]
    InvalidPermutation { order: Vec<usize>, expected: usize },

    #[error("mode {mode} out of range for an order-{order} tensor")]
    InvalidMode { mode: usize, order: usize },

    #[error("invalid tensor: {0}")]
    InvalidTensor(String),

    #[error("index {index} out of bounds for mode {mode} with size {dim} (entry {entry})")]
    IndexOutOfBounds {
        entry: usize,
        mode: usize,
        index: u64,
        dim: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-zero patterns differ at entry {entry}")]
    PatternMismatch { entry: usize },

    #[error("division by zero at entry {entry}")]
    DivideByZero { entry: usize },

    #[error(
        "tensor must be sorted with mode {mode} as the fastest-varying key (sort order: {found:?})"
    )]
    NotSorted {
        mode: usize,
        found: Option<Vec<usize>>,
    },

    #[error("operation {op} is not supported by {kernel}")]
    UnsupportedOp { kernel: &'static str, op: String },

    #[error("{0} does not fit in the 32-bit index type")]
    IndexOverflow(String),

    #[error("dense size {size} exceeds the oracle guard of {limit} elements")]
    SizeGuard { size: u128, limit: u128 },

    #[error("cannot draw {nnz} distinct entries from an index space of {capacity}")]
    InfeasibleNnz { nnz: usize, capacity: u128 },

    #[error("{kernel} cost model requires parameter `{param}`")]
    MissingParameter {
        kernel: &'static str,
        param: &'static str,
    },

    #[error("cost model parameter `{param}` must be positive")]
    NonPositiveParameter { param: &'static str },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("manifest: {0}")]
    Manifest(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
