use alloc::string::String;

/// Errors raised by the core operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("{qubits} qubits exceeds the configured cap of {cap}")]
    Capacity { qubits: usize, cap: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("internal numerical inconsistency: {0}")]
    Inconsistent(String),

    #[error("verifier call budget of {budget} exhausted after {attempts} attempts")]
    BudgetExhausted { budget: u64, attempts: u64 },

    #[error("index {index} out of range for {len} entries")]
    IndexOutOfRange { index: usize, len: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
