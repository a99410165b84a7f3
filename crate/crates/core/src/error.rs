use thiserror::Error;

/// Errors reported by the table engine, the oracles and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A coefficient formula hit a vanishing denominator.
    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("index ({0}, {1}) outside the domain of degree {2}")]
    IndexOutOfRange(i64, i64, usize),

    #[error("constraint |c| = {c} must be smaller than the degree {n}")]
    ConstraintTooLarge { c: usize, n: usize },

    #[error("no parameter equality holds for the reduced table path (alpha = {0:?})")]
    SymmetryPrecondition([f64; 3]),

    #[error("ill-conditioned system: {0}")]
    Conditioning(String),

    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),

    #[error("point ({0}, {1}) is outside the admissible domain")]
    Domain(f64, f64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
