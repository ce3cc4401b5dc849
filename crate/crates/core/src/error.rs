use thiserror::Error;

/// Errors raised by the numerical core.
///
/// `Numerical` marks a violated internal invariant (a bug or a precision
/// failure), everything else is a caller error.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid qubit indices: {0}")]
    Indices(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical invariant violated: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($arg:tt)*) => {
        let holds: bool = $cond;
        if !holds {
            return Err($crate::error::Error::$variant(format!($($arg)*)));
        }
    };
}
pub(crate) use ensure;
