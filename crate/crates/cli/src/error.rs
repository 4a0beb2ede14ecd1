use std::fmt;

use leavitt_core::Error;

/// Failures, each with a fixed exit code.
#[derive(Debug)]
pub enum CliError {
    /// A reproduction or property check came out false.
    Check(String),
    Usage(String),
    Parse(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Check(m) => write!(f, "check failed: {m}"),
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Precondition(m) => write!(f, "precondition failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::DuplicateName(_)
            | Error::DanglingEndpoint { .. }
            | Error::UnknownName(_)
            | Error::EmptyGraph => CliError::Parse(e.to_string()),
            Error::NotNoExit(_) => CliError::Precondition(format!("NotNoExit: {e}")),
            Error::NotIdempotent => CliError::Precondition(format!("NotIdempotent: {e}")),
            Error::NotProjection => CliError::Precondition(format!("NotProjection: {e}")),
            Error::NotPositiveDefinite(_) => {
                CliError::Precondition(format!("NotPositiveDefinite: {e}"))
            }
            _ => CliError::Precondition(e.to_string()),
        }
    }
}
