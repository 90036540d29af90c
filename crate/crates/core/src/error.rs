use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The series has a constant term for which no integer inverse or
    /// logarithm exists.
    #[error("constant term must be a unit, found {0}")]
    NonUnitConstantTerm(String),

    #[error("table too small: need {needed}, have {available}")]
    InsufficientTable { needed: String, available: String },

    /// The definition sum of a partial Bell polynomial did not reduce to an
    /// integer at an integer point.
    #[error("B({n},{k}) evaluated to non-integer {value}")]
    NonIntegerResult { n: usize, k: usize, value: String },

    #[error("unknown check '{0}'")]
    UnknownCheck(String),

    #[error("missing argument --{0}")]
    MissingArgument(&'static str),

    #[error("argument --{name} out of range: {reason}")]
    OutOfRange { name: &'static str, reason: String },

    #[error("malformed table: {0}")]
    MalformedTable(String),
}
