use std::fmt;

/// Command failures, partitioned by exit code.
///
/// 1 = I/O, 2 = validation, 3 = property violation (a dominance check that
/// should always pass came back false). Success is 0.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Validation(String),
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Violation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
            CliError::Validation(msg) => write!(f, "validation error: {msg}"),
            CliError::Violation(msg) => write!(f, "property violation: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<skilltask_core::Error> for CliError {
    fn from(err: skilltask_core::Error) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
