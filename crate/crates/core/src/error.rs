use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// Each variant maps to one process exit code in the command-line front end,
/// see [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual input (word syntax, presentation files).
    #[error("parse error: {0}")]
    Parse(String),

    /// Well-formed input that violates a precondition.
    #[error("input error: {0}")]
    Input(String),

    /// Operands that live over different ambient structures.
    #[error("dimension mismatch: {0}")]
    Mismatch(String),

    /// Inversion or division by zero.
    #[error("division by zero")]
    DivisionByZero,

    /// The deleted Fox matrix is not injective over the twisted Laurent ring,
    /// so the covering is not L2-acyclic and no Euler characteristic exists.
    #[error("not L2-acyclic: {0}")]
    NotAcyclic(String),

    /// A quotient or character shape outside the supported families.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Coefficient growth exceeded the configured byte budget.
    #[error("size guard: coefficient storage reached {bytes} bytes (limit {limit})")]
    SizeGuard { bytes: usize, limit: usize },
}

impl Error {
    /// 0 success, 1 non-acyclic, 2 input or parse error, 3 size guard, 4 unsupported shape.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotAcyclic(_) => 1,
            Error::Parse(_) | Error::Input(_) | Error::Mismatch(_) | Error::DivisionByZero => 2,
            Error::SizeGuard { .. } => 3,
            Error::Unsupported(_) => 4,
        }
    }

    /// Short machine-readable tag used in structured output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Input(_) => "input",
            Error::Mismatch(_) => "mismatch",
            Error::DivisionByZero => "division-by-zero",
            Error::NotAcyclic(_) => "not-acyclic",
            Error::Unsupported(_) => "unsupported",
            Error::SizeGuard { .. } => "size-guard",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
