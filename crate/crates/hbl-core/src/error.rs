use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the numerical operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A point lies outside (or too close to the boundary of) the domain of
    /// definition of a map or series.
    #[error("point {point} rejected: {reason}")]
    DomainViolation { point: Complex64, reason: String },

    /// An operation hit a point where it is not defined (e.g. a vanishing
    /// denominator in a dilatation quotient).
    #[error("degenerate point {point}: {reason}")]
    Degenerate { point: Complex64, reason: String },

    /// Structurally invalid input data.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A dilatation sample left the unit disk, so the sense-preserving
    /// hypothesis behind the curve integrals fails.
    #[error("not a sense-preserving dilatation on the curve: |a({point})| = {modulus}")]
    NotSensePreserving { point: Complex64, modulus: f64 },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature failed (requested tolerance {tolerance}): {reason}")]
    QuadratureFailure { tolerance: f64, reason: String },

    /// The iterative grid solver ran out of its sweep budget.
    #[error("grid solver did not converge: residual {residual:.3e} after {sweeps} sweeps")]
    NonConvergence { residual: f64, sweeps: usize },

    /// An evaluation failed while probing a map close to the boundary.
    #[error("evaluation failed near the boundary at radius {radius}: {source}")]
    BoundaryEvaluation {
        radius: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
