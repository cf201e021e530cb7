use thiserror::Error;

/// Errors produced by the tropical plane toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid point: every coordinate is -inf")]
    InvalidPoint,

    #[error("point lies on the boundary z = -inf and has no chart image")]
    BoundaryPoint,

    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("operation requires finite values: {0}")]
    NonFinite(String),

    #[error("negation of -inf is not a tropical scalar")]
    NegateBottom,

    #[error("matrix is not normal")]
    NotNormal,

    #[error("matrix is not idempotent")]
    NotIdempotent,

    #[error("parameter out of range: {0}")]
    ParamRange(String),

    #[error("parameter constraints violated: {}", .0.join("; "))]
    ConstraintViolation(Vec<String>),

    #[error("matrix is not in lower canonical form")]
    NotCanonical,

    #[error("no antenna for {0}")]
    NoSuchAntenna(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::InvalidMatrix(_) => "invalid-matrix",
            Error::InvalidPoint => "invalid-point",
            Error::BoundaryPoint => "boundary-point",
            Error::Degenerate(_) => "degenerate",
            Error::NonFinite(_) => "non-finite",
            Error::NegateBottom => "negate-bottom",
            Error::NotNormal => "not-normal",
            Error::NotIdempotent => "not-idempotent",
            Error::ParamRange(_) => "param-range",
            Error::ConstraintViolation(_) => "constraint-violation",
            Error::NotCanonical => "not-canonical",
            Error::NoSuchAntenna(_) => "no-such-antenna",
            Error::Internal(_) => "internal",
        }
    }

    /// Bad input as opposed to a valid input outside an operation's domain.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::InvalidMatrix(_) | Error::InvalidPoint
        )
    }
}
