use std::fmt;
use std::process::ExitCode;

/// A failure mapped to the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, invalid parameter values, unreadable or malformed input
    /// files, unwritable outputs. Exit code 2.
    Input(String),
    /// Failure while computing on valid input. Exit code 3.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Runtime(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Classify a core error at the call site.
pub trait Classify<T> {
    fn input(self) -> CliResult<T>;
    fn runtime(self) -> CliResult<T>;
}

impl<T, E: fmt::Display> Classify<T> for Result<T, E> {
    fn input(self) -> CliResult<T> {
        self.map_err(|e| CliError::Input(e.to_string()))
    }

    fn runtime(self) -> CliResult<T> {
        self.map_err(|e| CliError::Runtime(e.to_string()))
    }
}

pub fn invalid(message: impl Into<String>) -> CliError {
    CliError::Input(message.into())
}
