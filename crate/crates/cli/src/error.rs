use serde_json::json;

/// Failure of a CLI run, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, parameters or config: exit 1.
    Usage(String),
    /// Unreadable input or unwritable output: exit 1.
    Io(String),
    /// Numerical failure or failed validation: exit 2.
    Numerical(String),
}

impl CliError {
    pub fn io(e: impl std::fmt::Display) -> Self {
        CliError::Io(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    /// One JSON line for stderr.
    pub fn to_line(&self) -> String {
        let (kind, message) = match self {
            CliError::Usage(m) => ("usage", m),
            CliError::Io(m) => ("io", m),
            CliError::Numerical(m) => ("numerical", m),
        };
        json!({ "error": { "kind": kind, "message": message } }).to_string()
    }
}

impl From<alasso::Error> for CliError {
    fn from(e: alasso::Error) -> Self {
        match e {
            alasso::Error::Domain(m) => CliError::Usage(m),
            other => CliError::Numerical(other.to_string()),
        }
    }
}
