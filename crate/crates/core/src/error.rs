use thiserror::Error;

/// Errors raised by the kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("incompatible algebras: {0}")]
    IncompatibleAlgebras(String),
    #[error("generator name collision: {0}")]
    NameCollision(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resource guard: {0}")]
    ResourceGuard(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
