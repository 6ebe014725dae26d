use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    /// An exponential-size object would exceed the configured cap.
    #[error("capacity exceeded: {what} needs {required} but the cap is {cap}")]
    Capacity {
        what: &'static str,
        required: String,
        cap: u64,
    },

    /// The function has an odd number of fixed points on the cycle.
    #[error("function has {fixed_points} fixed points; it is not in the even class")]
    OddParity { fixed_points: usize },

    /// The function has no neighbor in the exponential graph.
    #[error("function is isolated: {0}")]
    Isolated(String),

    #[error("not found: {0}")]
    NotFound(String),

    /// A mathematical invariant the algorithms rely on failed to hold.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn capacity(what: &'static str, required: impl ToString, cap: u64) -> Self {
        Error::Capacity {
            what,
            required: required.to_string(),
            cap,
        }
    }
}
