use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Arguments outside an operation's domain (shape or photon-number mismatch, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The request is valid but exceeds a deliberate size guard.
    #[error("refused: {0}")]
    Refusal(String),

    /// Amplitude escapes the chosen rail-mode subset.
    #[error("leakage: closure deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    Leakage { deviation: f64, tol: f64 },

    /// A numerical result violated an internal invariant.
    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Parse(format!("{other:?}")),
        }
    }
}
