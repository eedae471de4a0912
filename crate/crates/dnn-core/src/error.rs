use alloc::string::String;
use core::fmt;

/// Errors produced by problem construction, parsing and the numerical kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid input data (dimension mismatch, non-finite entries, ...).
    Input(String),
    /// A cone-membership precondition was violated (e.g. a matrix handed to
    /// the low-rank factorization is significantly indefinite).
    Cone(String),
    /// DIMACS parse failure, with the 1-based line number.
    Parse { line: usize, msg: String },
    /// The constraint Gram matrix is not positive definite, i.e. the
    /// constraints are linearly dependent.
    SingularConstraints,
    /// All rows of a time matrix were excluded, leaving nothing to profile.
    EmptyProfile,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
            Error::Cone(msg) => write!(f, "cone violation: {msg}"),
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::SingularConstraints => {
                write!(f, "constraint operator is not of full row rank")
            }
            Error::EmptyProfile => write!(f, "no instances left to build profiles from"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn cone(msg: impl Into<String>) -> Self {
        Error::Cone(msg.into())
    }
}
