use std::fmt;

/// Failures that stop a run before its checks are reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// A parameter violates a precondition; exit status 2.
    Usage(String),
    /// A resource budget would be exceeded; exit status 3.
    Resource(String),
    /// Anything else, e.g. an artifact could not be written; exit status 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid parameters: {m}"),
            CliError::Resource(m) => write!(f, "{m}"),
            CliError::Failure(m) => write!(f, "{m}"),
        }
    }
}

impl From<heatlab_core::Error> for CliError {
    fn from(e: heatlab_core::Error) -> Self {
        use heatlab_core::Error;
        match e {
            Error::Resource(_) => CliError::Resource(e.to_string()),
            Error::Io(_) => CliError::Failure(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("i/o error: {e}"))
    }
}
