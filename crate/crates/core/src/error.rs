use thiserror::Error;

/// Errors produced by the algebra, orbit and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("algebra tag mismatch: {0}")]
    Tag(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsatisfiable sampling constraint: {0}")]
    Constraint(String),

    #[error("numerical degeneracy: {0}")]
    Degeneracy(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("subalgebra is not closed under the bracket (residual {residual:e})")]
    NotClosed { residual: f64 },

    #[error("lower central series did not vanish within {steps} steps")]
    NotNilpotent { steps: usize },

    #[error("target point is not in the orbit slice: {0}")]
    Unreachable(String),

    #[error("target point lies on the wrong half of the slice")]
    WrongHalf,

    #[error("degenerate point: {0}")]
    DegeneratePoint(String),

    #[error("normal space carries an indefinite form; tube not defined")]
    IndefiniteNormal,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
