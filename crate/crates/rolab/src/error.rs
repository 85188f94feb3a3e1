use std::fmt;

/// Errors reported by fallible operations across the crate.
///
/// Shape violations inside pure arithmetic (`matmul`, `approx_eq`, ...)
/// are programmer errors and panic instead; the variants here cover the
/// conditions a caller can meaningfully handle.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand shapes are not conformable for the requested operation.
    DimensionMismatch(String),
    /// Two subspaces live in different ambient spaces.
    AmbientMismatch { lhs: usize, rhs: usize },
    /// A zero-dimensional subspace where a positive dimension is required.
    EmptySubspace,
    /// Columns expected to be orthonormal deviate by the given Frobenius residual.
    NotOrthonormal(f64),
    /// A matrix expected to be unitary deviates by the given Frobenius residual.
    NotUnitary(f64),
    /// A block parameter does not match the spectral block structure.
    BlockShapeMismatch(String),
    /// A construction plan violates its rank/dimension budget.
    PlanInfeasible(String),
    /// The pair does not satisfy the full reverse-order law (residual attached).
    RolNotSatisfied(f64),
    /// Malformed matrix file or unsupported format request.
    Format(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::AmbientMismatch { lhs, rhs } => {
                write!(f, "ambient dimensions differ: {lhs} vs {rhs}")
            }
            Error::EmptySubspace => write!(f, "zero-dimensional subspace"),
            Error::NotOrthonormal(dev) => {
                write!(f, "columns are not orthonormal (residual {dev:.3e})")
            }
            Error::NotUnitary(dev) => write!(f, "matrix is not unitary (residual {dev:.3e})"),
            Error::BlockShapeMismatch(msg) => write!(f, "block shape mismatch: {msg}"),
            Error::PlanInfeasible(msg) => write!(f, "infeasible construction plan: {msg}"),
            Error::RolNotSatisfied(res) => {
                write!(f, "reverse-order law does not hold (residual {res:.3e})")
            }
            Error::Format(msg) => write!(f, "format error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
