use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors split into two families: invalid inputs (bad dimensions, parameters,
/// weights) and numerical failures (states that stopped being states, truncation
/// losses above tolerance). The CLI maps the families onto distinct exit codes.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("party index {site} out of range for {parties} parties")]
    SiteOutOfRange { site: usize, parties: usize },
    #[error("total dimension {total} exceeds the dense-storage cap of {cap}")]
    DimensionCap { total: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { residual: f64, tolerance: f64 },
    #[error("trace deviates from 1 by {deviation:.3e} (tolerance {tolerance:.3e})")]
    TraceDeviation { deviation: f64, tolerance: f64 },
    #[error("state has eigenvalue {min:.3e} below the PSD tolerance -{tolerance:.3e}")]
    NotPositive { min: f64, tolerance: f64 },
    #[error("mixture weights must be positive and sum to 1 (deviation {deviation:.3e})")]
    InvalidWeights { deviation: f64 },
    #[error("truncated probability mass {lost:.3e} exceeds tolerance {tolerance:.3e}")]
    TruncationLoss { lost: f64, tolerance: f64 },
    #[error("POVM effects sum deviates from identity by {deviation:.3e}")]
    IncompletePovm { deviation: f64 },
    #[error("numerical residual in {context}: {residual:.3e} exceeds {tolerance:.3e}")]
    ResidualTooLarge {
        context: &'static str,
        residual: f64,
        tolerance: f64,
    },
    #[error("variance of the auxiliary operator is {value:.3e}, too small to divide by")]
    DegenerateVariance { value: f64 },
    #[error("eigendecomposition did not converge")]
    EigenConvergence,
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

impl Error {
    /// True for failures of floating-point origin (as opposed to malformed
    /// inputs). Used by callers that distinguish validation from numerics.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::TraceDeviation { .. }
                | Error::NotPositive { .. }
                | Error::TruncationLoss { .. }
                | Error::ResidualTooLarge { .. }
                | Error::DegenerateVariance { .. }
                | Error::EigenConvergence
        )
    }
}
