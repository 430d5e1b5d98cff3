use crate::solver::IterationTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A witness did not reproduce when re-evaluated.
    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("no seed converged within {max_iter} iterations")]
    NonConvergence {
        max_iter: usize,
        traces: Box<Vec<IterationTrace>>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
