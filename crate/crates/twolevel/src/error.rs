use thiserror::Error;

/// Errors shared by all modules of the crate.
///
/// Mathematical *findings* (a violating pair, a failed inequality, a missing
/// witness) are not errors; they are reported as data. Errors are reserved for
/// inputs that break an operation's contract.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{side} does not linearly span the ambient space (rank {rank} < {dim})")]
    NotSpanning { side: &'static str, rank: usize, dim: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("zero vector not allowed: {0}")]
    ZeroVector(&'static str),

    #[error("duplicate point at index {index}")]
    DuplicatePoint { index: usize },

    #[error("pivot direction not found in B (or zero)")]
    PivotNotInB,

    #[error("fiber of projected point has {count} preimages (at most 2 allowed); offending b index {b_index}")]
    FiberTooLarge { b_index: usize, count: usize },

    #[error("paired element at index {b_index} is constant on neither level set; input is invalid or not maximal")]
    PartitionFailure { b_index: usize },

    #[error("{side} is not inclusion-maximal: {missing} completable point(s) missing, e.g. {example}")]
    NotMaximal { side: &'static str, missing: usize, example: String },

    #[error("polytope is not full-dimensional (affine dimension {affine_dim} < {dim})")]
    NotFullDimensional { affine_dim: usize, dim: usize },

    #[error("polytope is not 2-level; run the 2-level check for a witness")]
    NotTwoLevel,

    #[error("listed point at index {index} is not a vertex of the hull")]
    NotAVertex { index: usize },

    #[error("scale limit exceeded: {what} (pass --long-running to override)")]
    ScaleExceeded { what: String },

    #[error("invalid rational literal {literal:?}: {reason}")]
    BadRational { literal: String, reason: String },

    #[error("invalid input: {0}")]
    BadInput(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
