use thiserror::Error;

/// Errors produced by construction and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("label collision: {0:?} appears in both operand spaces")]
    LabelCollision(String),

    #[error("unknown subsystem label {0:?}")]
    UnknownLabel(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("entries contain NaN or infinity")]
    NonFinite,

    #[error("matrix is not Hermitian: max |A - A^H| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eig:.3e}")]
    NotPositive { min_eig: f64 },

    #[error("trace deviates from 1 by {deviation:.3e}")]
    BadTrace { deviation: f64 },

    #[error("state norm deviates from 1 by {deviation:.3e}")]
    BadNorm { deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integration failed to meet tolerance; achieved local error {achieved:.3e}")]
    IntegrationFailure { achieved: f64 },

    #[error("Liouvillian null space is degenerate (second singular value {second:.3e})")]
    DegenerateSteadyState { second: f64 },

    #[error("exponential fit rejected: residual {residual:.3e} exceeds {limit:.3e}")]
    FitFailure { residual: f64, limit: f64 },

    #[error("measurement settings are informationally incomplete: {0}")]
    IncompleteSettings(String),

    #[error("empty input: {0}")]
    EmptyInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
