use thiserror::Error;

/// Errors raised by the engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot mix rational and float scalars in one computation")]
    ModeMismatch,
    #[error("order {got} out of range (allowed {min}..={max})")]
    OrderOutOfRange { got: usize, min: usize, max: usize },
    #[error("requested order {requested} exceeds available order {available}")]
    OrderExceeded { requested: usize, available: usize },
    #[error("moment sequence must start with M(0) = 1")]
    NotNormalized,
    #[error("inner series has a nonzero constant term")]
    NonZeroConstantTerm,
    #[error("leading coefficient must be 1")]
    LeadingCoefficient,
    #[error("product needs depth {needed} but the model has depth {depth}")]
    DepthExceeded { needed: usize, depth: usize },
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown convolution kind: {0}")]
    UnknownKind(String),
    #[error("inconsistent moment data: {0}")]
    Inconsistent(String),
    #[error("cannot parse scalar: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
