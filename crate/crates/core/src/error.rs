use thiserror::Error;

/// Raised when a kernel is evaluated inside the blow-up window around a
/// conjugate time `k·π/λ₀` of an oscillatory operator.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("t = {t} lies within {window:e} of the singular time t_{k} = {t_singular}")]
pub struct SingularTimeError {
    pub t: f64,
    pub k: u64,
    pub t_singular: f64,
    /// Half-width of the rejected interval, in time units.
    pub window: f64,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid operator: {field} {reason}")]
    InvalidOperator { field: &'static str, reason: String },

    #[error("malformed operator JSON: {0}")]
    Parse(String),

    #[error(transparent)]
    SingularTime(#[from] SingularTimeError),

    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),

    #[error("geodesic parameter s = {0} is outside [0, 1]")]
    ParameterOutOfRange(f64),

    #[error("dimension mismatch: operator has {expected} factors, got {got} coordinates")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("factor {index}: {source}")]
    Factor {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("integrand is not a decaying Gaussian in the integration variable (quadratic coefficient {0})")]
    NotNegativeDefinite(f64),

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("geodesic is not unique: {0}")]
    NotUnique(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
