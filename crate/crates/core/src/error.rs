use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("non-finite entry {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("invalid Orlicz function: {0}")]
    InvalidOrlicz(String),

    #[error("invalid weight sequence: {0}")]
    InvalidWeights(String),

    #[error("cannot bracket N^-1({0}): N stays below it on the probe range")]
    NotBracketable(f64),

    #[error("dimension cap exceeded: {what} needs {needed}, cap is {cap}")]
    DimensionCap {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("condition (lim sup w_(2^k)/w_(2^(k+n)))^(1/n) < 2^(1/q) fails: margin {margin}")]
    ConditionFailed { margin: f64 },

    #[error("b not in Im T_lambda (moment {moment})")]
    NotInRange { moment: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown {0}")]
    UnknownKind(String),

    #[error("malformed spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
