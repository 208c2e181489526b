//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-domain input (dimension mismatch, non-finite
    /// entries, non-square where square is required, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A matrix required to be nonsingular is singular under the rank
    /// tolerance.
    #[error("singular input: {0}")]
    SingularInput(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// `R + B'QB` is singular, so the Riccati residual is undefined for
    /// this `Q`.
    #[error("R + B'QB is singular (min |eigenvalue| = {min_abs_eig:.3e}); the Riccati residual is undefined")]
    IndefiniteInnerTerm {
        /// Smallest eigenvalue magnitude of `R + B'QB`.
        min_abs_eig: f64,
    },

    /// A postcondition check failed; the tolerance policy is inadequate
    /// for the problem data.
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    /// The Stein equation `A P A' - P = B R^-1 B'` is inconsistent, so no
    /// solution family exists.
    #[error("the Stein equation has no solution for this problem")]
    NoSteinSolution,
}

pub type Result<T> = std::result::Result<T, Error>;
