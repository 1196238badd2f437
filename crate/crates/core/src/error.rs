use thiserror::Error;

/// Errors raised by every computation in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("operands live in different rings")]
    RingMismatch,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("missing test element: {0}")]
    MissingTestElement(String),

    #[error("resource limit exceeded: {0}")]
    Budget(String),

    #[error("no stabilization: {0}")]
    NoStabilization(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget(_) | Error::NoStabilization(_) => 3,
            Error::Invariant(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
