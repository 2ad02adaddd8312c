use std::fmt;

use timebin::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const VALIDATION_NEGATIVE: i32 = 2;
    pub const LEAKAGE: i32 = 3;
    pub const CONFIG: i32 = 4;
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { code: exit::CONFIG, kind: "config", message: message.into() }
    }

    /// Machine-readable form written to standard error.
    pub fn report(&self) -> String {
        format!("error code={} kind={} message={:?}", self.code, self.kind, self.message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse(_) => (exit::CONFIG, "parse"),
            Error::Domain(_) => (exit::CONFIG, "domain"),
            Error::Io(_) => (exit::CONFIG, "io"),
            Error::Leakage { .. } => (exit::LEAKAGE, "leakage"),
            Error::Refusal(_) => (exit::INTERNAL, "refusal"),
            Error::Consistency(_) => (exit::INTERNAL, "consistency"),
        };
        Self { code, kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
