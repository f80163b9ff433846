use thiserror::Error;

use crate::smoothing::Solution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("payoff matrix is empty")]
    EmptyMatrix,

    #[error("payoff matrix is not rectangular: row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },

    /// Position is 1-based, (row, column).
    #[error("non-finite payoff entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("strategy profile is not in the simplex product: {0}")]
    InfeasibleProfile(String),

    #[error("vector is empty")]
    EmptyVector,

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("polyhedron is empty")]
    InfeasiblePolyhedron,

    #[error("generator set has no points")]
    NoPoints,

    #[error("strategy profile is an equilibrium (gap {gap:e})")]
    PointIsEquilibrium { gap: f64 },

    #[error("all strategy profiles are equilibria")]
    AllEquilibria,

    #[error("parameter z = {z} is outside (0, {upper})")]
    ParameterOutOfRange { z: f64, upper: f64 },

    #[error("game of size {m}x{n} exceeds the enumeration limit m+n <= {limit}")]
    TooLarge { m: usize, n: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The best iterate found and its trace ride along with the error.
    #[error("iteration limit exceeded (best gap {:e})", .0.trace.final_gap)]
    IterationLimitExceeded(Box<Solution>),
}
