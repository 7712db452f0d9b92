use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar parameter fell outside its legal interval.
    #[error("{name} = {value} is outside the legal interval {interval}")]
    Domain {
        name: &'static str,
        value: f64,
        interval: &'static str,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension {0}; expected 2 or 4")]
    UnsupportedDimension(usize),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Branch growth exceeded the configured limit.
    #[error("superswitch produced {count} candidate branches, exceeding the limit of {limit}")]
    TooManyBranches { count: usize, limit: usize },

    #[error("order {order} exceeds the configured cap {cap}")]
    OrderCap { order: usize, cap: usize },

    #[error("triple is not a fixed point of the recurrence (residual {0:.3e})")]
    NotFixedPoint(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by resource limits rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::TooManyBranches { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
