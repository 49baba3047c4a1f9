use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps [`Error::Invalid`] to exit status 1 and every other variant
/// to exit status 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("mixed primes {0} and {1}")]
    MixedPrimes(u64, u64),
    #[error("division by an element indistinguishable from zero")]
    DivisionByZero,
    #[error("argument must be a unit: {0}")]
    NotUnit(String),
    #[error("zero argument: {0}")]
    Zero(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Invalid(_) => "invalid",
            Error::MixedPrimes(..) => "mixed_primes",
            Error::DivisionByZero => "division_by_zero",
            Error::NotUnit(_) => "not_unit",
            Error::Zero(_) => "zero",
            Error::Unsupported(_) => "unsupported",
            Error::CapExceeded(_) => "cap_exceeded",
            Error::Precision(_) => "precision",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
