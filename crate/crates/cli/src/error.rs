use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error("unsupported schema version {0}")]
    Version(u32),

    #[error("{0}")]
    Io(String),

    #[error("{0}")]
    Precondition(String),

    #[error("certificate for different algebra")]
    HashMismatch,

    #[error(transparent)]
    Core(#[from] evolia_core::Error),
}

impl CliError {
    /// 1 for input and precondition problems, 2 for internal invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(evolia_core::Error::Invariant(_)) => 2,
            _ => 1,
        }
    }
}
