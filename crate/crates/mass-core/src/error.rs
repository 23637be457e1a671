use std::fmt;

/// Errors surfaced by the simulation and analysis primitives.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied parameter violates an operation's preconditions.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A node index outside the graph's node range.
    #[error("node index {index} out of range for {node_count} nodes")]
    InvalidIndex { index: usize, node_count: usize },

    /// Input that is structurally valid but statistically meaningless
    /// (all-zero differences, constant predictor, ...).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A record id occurred more than once in an interaction log.
    #[error("duplicate record id: {0}")]
    DuplicateId(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl fmt::Display) -> Self {
        Error::InvalidParameter(msg.to_string())
    }

    pub(crate) fn degenerate(msg: impl fmt::Display) -> Self {
        Error::DegenerateInput(msg.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
