//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by qpure operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("trace is {trace:.12} instead of 1")]
    InvalidTrace { trace: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("inconsistent shapes: {0}")]
    ShapeMismatch(String),

    #[error("vector is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },

    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { dim: usize, rank: usize },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("channel is not trace preserving (deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("angle {phi} outside the admissible range [0, {theta}]")]
    AngleOutOfRange { phi: f64, theta: f64 },

    #[error("input states are collinear; no orthogonal companion vector exists")]
    CollinearInputs,

    #[error("target distance {target} exceeds the current distance {current}")]
    TargetTooLarge { target: f64, current: f64 },

    #[error("recipe is inconsistent: {0}")]
    RecipeInconsistent(String),

    #[error("need at least {needed} states, got {found}")]
    TooFewStates { needed: usize, found: usize },

    #[error("mixing parameter p = {p} outside the open interval (0, 1/2)")]
    POutOfRange { p: f64 },

    #[error("unambiguous discrimination is not feasible: {0}")]
    NotFeasible(String),

    #[error("subspace has no basis vectors")]
    EmptySubspace,

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("tolerance {name} = {value} outside [0, 1e-4]")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed file: {0}")]
    MalformedFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
