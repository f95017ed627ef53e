//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by any of the numeric or geometric operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its subdivision budget. The best
    /// estimate and its error bound are carried for diagnostics.
    #[error("quadrature failed to converge (estimate {estimate:.6e}, error bound {error_bound:.3e})")]
    QuadratureFailure { estimate: f64, error_bound: f64 },

    /// The integral is divergent (integrand blows up on a set the
    /// quadrature cannot tame, or the running estimate exceeded 1e12).
    #[error("divergent integral (partial estimate {0:.6e})")]
    Divergent(f64),

    /// A body description failed validation.
    #[error("invalid body: {0}")]
    InvalidBody(String),

    /// A function or profile failed validation (concavity, positivity, ...).
    #[error("invalid function: {0}")]
    InvalidFunction(String),

    /// Monte Carlo sampling box has a non-positive side.
    #[error("degenerate sampling box")]
    DegenerateBox,

    /// Bisection failed to bracket or converge.
    #[error("bisection failed: {0}")]
    Bisection(String),

    /// Operation not defined for this dimension or representation.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
