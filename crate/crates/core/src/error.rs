use thiserror::Error;

/// Errors raised by the geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QgtError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is not one (got {trace})")]
    TraceNotOne { trace: f64 },

    #[error("density matrix is not full rank (min eigenvalue {min_eigenvalue:.3e})")]
    NotFullRank { min_eigenvalue: f64 },

    #[error("eigensolver did not converge")]
    ConvergenceFailure,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error(
        "ambiguous level matching: levels {first} and {second} both best-match level {target}"
    )]
    AmbiguousMatching {
        target: usize,
        first: usize,
        second: usize,
    },

    #[error("degenerate spectrum (min gap {gap:.3e})")]
    DegenerateSpectrum { gap: f64 },

    #[error("parameter {value} on axis {axis} is outside the family domain")]
    DomainExceeded { axis: usize, value: f64 },

    #[error("wrong number of parameters: expected {expected}, got {got}")]
    ParameterCount { expected: usize, got: usize },

    #[error("family is not pure")]
    NotPure,

    #[error("Fock truncation too small: top level weight {weight:.3e} exceeds {tolerance:.1e}")]
    TruncationTooSmall { weight: f64, tolerance: f64 },

    #[error("level crossing detected at curve step {step}")]
    LevelCrossing { step: usize },

    #[error("axis {axis} out of range for {n_params} parameters")]
    AxisOutOfRange { axis: usize, n_params: usize },

    #[error("operation needs exactly two parameters, family has {n_params}")]
    NotTwoParameter { n_params: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl QgtError {
    /// True for errors caused by the numerical state of the family at a point
    /// (as opposed to malformed arguments).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            QgtError::NotHermitian { .. }
                | QgtError::TraceNotOne { .. }
                | QgtError::NotFullRank { .. }
                | QgtError::ConvergenceFailure
                | QgtError::AmbiguousMatching { .. }
                | QgtError::DegenerateSpectrum { .. }
                | QgtError::TruncationTooSmall { .. }
                | QgtError::LevelCrossing { .. }
                | QgtError::NonFinite
        )
    }
}

pub type Result<T> = std::result::Result<T, QgtError>;
