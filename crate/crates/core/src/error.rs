use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A linear system has no unique solution.
    #[error("singular system: {0}")]
    Singular(String),

    /// The target series is not in the span of the basis; `index` is the
    /// first coefficient where the reconstruction disagrees.
    #[error("residual at coefficient a_{index}: expected {expected}, reconstructed {actual}")]
    Inconsistent {
        index: usize,
        expected: String,
        actual: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
