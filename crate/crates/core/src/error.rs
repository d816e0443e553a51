//! Crate-wide error type.
//!
//! Variants are grouped by how a caller is expected to react: bad input data
//! (`Parse`, `Dimension`), a method invoked outside its precondition
//! (`Precondition`), an API used against the wrong resolution (`Usage`), and
//! internal consistency failures that indicate a bug rather than bad input
//! (`Internal`).

use std::error;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A scalar or document fragment failed to parse.
    Parse { text: String, reason: String },
    /// Matrix or vector shapes do not conform.
    Dimension { context: &'static str, detail: String },
    /// A solution method was invoked outside its stated precondition.
    Precondition { method: &'static str, reason: String },
    /// An operation was applied to a resolution of the wrong kind.
    Usage { context: &'static str, reason: String },
    /// An exact identity that must hold by construction failed to verify.
    Internal { context: &'static str, detail: String },
}

impl Error {
    pub(crate) fn dim(context: &'static str, detail: impl Into<String>) -> Self {
        Error::Dimension { context, detail: detail.into() }
    }

    pub(crate) fn precondition(method: &'static str, reason: impl Into<String>) -> Self {
        Error::Precondition { method, reason: reason.into() }
    }

    pub(crate) fn usage(context: &'static str, reason: impl Into<String>) -> Self {
        Error::Usage { context, reason: reason.into() }
    }

    pub(crate) fn internal(context: &'static str, detail: impl Into<String>) -> Self {
        Error::Internal { context, detail: detail.into() }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { text, reason } => write!(f, "cannot parse {text:?}: {reason}"),
            Error::Dimension { context, detail } => write!(f, "{context}: {detail}"),
            Error::Precondition { method, reason } => {
                write!(f, "{method}: precondition violated: {reason}")
            }
            Error::Usage { context, reason } => write!(f, "{context}: {reason}"),
            Error::Internal { context, detail } => {
                write!(f, "internal consistency failure in {context}: {detail}")
            }
        }
    }
}

impl error::Error for Error {}
