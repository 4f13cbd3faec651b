use thiserror::Error;

use crate::kernel_lattice::MinimaCertificate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A numerical routine could not reach the requested tolerance.
    #[error("no convergence: achieved error {achieved:e}, requested {requested:e}")]
    Convergence { achieved: f64, requested: f64 },

    /// A search ran out of its budget. `best` carries the best upper bounds
    /// found so far when there are any.
    #[error("resource limit reached: {what}")]
    ResourceLimit {
        what: String,
        best: Option<Box<MinimaCertificate>>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn limit(what: impl Into<String>) -> Self {
        Error::ResourceLimit {
            what: what.into(),
            best: None,
        }
    }
}
