use std::fmt;

/// A set of violated parameter constraints, one message per constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub violations: Vec<String>,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.violations.join("; "))
    }
}

impl std::error::Error for ValidationError {}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Validation(#[from] ValidationError),

    #[error("utility undefined: {what} = {value} is not positive")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid state (i_S={i_s}, i_I={i_i}) for Z={z}")]
    InvalidState { i_s: usize, i_i: usize, z: usize },

    #[error("chain may be reducible: mutation rate is zero")]
    Reducible,

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 2 for bad input, 1 for numerical or I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_)
            | Error::Domain { .. }
            | Error::InvalidState { .. }
            | Error::Reducible
            | Error::Config(_) => 2,
            Error::Solver(_) | Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
