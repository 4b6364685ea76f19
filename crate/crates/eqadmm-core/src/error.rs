use alloc::string::String;
use core::fmt;

/// Errors shared by all solver and equilibration routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input violates a precondition (wrong shape, non-finite data,
    /// rank deficiency, nonpositive scale, ...).
    InvalidInput(String),
    /// Structurally degenerate input for which the operation is
    /// undefined, e.g. a zero row or column in equilibration.
    DegenerateInput(String),
    /// An iteration produced scaling factors outside the representable
    /// working range.
    Divergence(String),
    /// A reference oracle hit its iteration cap before reaching the
    /// requested accuracy.
    OracleFailure(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::DegenerateInput(msg) => write!(f, "degenerate input: {msg}"),
            Error::Divergence(msg) => write!(f, "divergence: {msg}"),
            Error::OracleFailure(msg) => write!(f, "oracle failure: {msg}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
