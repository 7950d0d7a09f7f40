use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A subset mask uses elements outside the family's ground set.
    #[error("ground-set mismatch: mask {mask:#x} has elements outside [{n}]")]
    GroundMismatch { n: u32, mask: u128 },

    #[error("element {element} out of range for ground set [{n}]")]
    ElementOutOfRange { element: u32, n: u32 },

    #[error("ground-set size {n} invalid (must satisfy 1 <= n <= 128)")]
    InvalidGround { n: u32 },

    #[error("operation undefined on an empty family")]
    EmptyFamily,

    #[error("invalid parameter: {0}")]
    Range(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Violation of an internal invariant (e.g. a fixpoint loop running past
    /// its potential-function bound). Should be unreachable.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::BudgetExceeded(msg.into())
    }
}
