use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to
/// reproduce the failing evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not symmetric: residual {residual:.3e} exceeds {limit:.3e}")]
    NotSymmetric { residual: f64, limit: f64 },

    #[error("matrix is not symplectic: residual {residual:.3e}")]
    NotSymplectic { residual: f64 },

    #[error("frames live in different ambient spaces ({left} vs {right})")]
    AmbientMismatch { left: String, right: String },

    #[error("degenerate Lagrangian frame: {0}")]
    DegenerateFrame(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("step count {0} is below the minimum of 16")]
    StepCountTooSmall(usize),

    #[error("coefficient matrix is not symmetric at t = {t}: residual {residual:.3e}")]
    NonSymmetricCoefficient { t: f64, residual: f64 },

    #[error("degenerate crossing at t = {t} for boundary {boundary}")]
    DegenerateCrossing { t: f64, boundary: String },

    #[error("path carries no coefficient path but a crossing form is required")]
    MissingCoefficientPath,

    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        what: String,
        iterations: usize,
        residual: f64,
    },

    #[error("B(t) + Lambda is not positive definite at t = {t}")]
    NotPositiveDefinite { t: f64 },

    #[error("D block of B(t) is not positive definite at t = {t}")]
    DBlockNotPositive { t: f64 },

    #[error("A - sB is degenerate at endpoint s = {s}")]
    DegenerateEndpoint { s: f64 },

    #[error("shooting Jacobian is singular (singular values {singular_values:?})")]
    SingularJacobian { singular_values: Vec<f64> },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
