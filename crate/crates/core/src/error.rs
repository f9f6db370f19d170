use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input violates a structural invariant (bad index, bad segment, wrong group, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// Adding two vectors whose added indices differ leaves `R_sme`.
    #[error("outside R_sme: added indices {0} and {1} differ")]
    OutsideRsme(String, String),

    #[error("not a cut realization: {0}")]
    NotARealization(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("JSON error at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Prefixes the message with the location of the offending JSON value.
    pub(crate) fn at(self, path: &str) -> Error {
        match self {
            Error::Validation(m) => Error::Validation(format!("{path}: {m}")),
            Error::NotARealization(m) => Error::NotARealization(format!("{path}: {m}")),
            Error::Precondition(m) => Error::Precondition(format!("{path}: {m}")),
            Error::Parse { position, message } => Error::Parse { position, message: format!("{path}: {message}") },
            other => other,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        let text = e.to_string();
        let message = text.split(" at line ").next().unwrap_or(&text).to_string();
        Error::Json { line: e.line(), column: e.column(), message }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
