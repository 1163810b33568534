use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown subpoint `{0}`")]
    UnknownSubpoint(String),
    #[error("unknown student outcome {0}")]
    UnknownOutcome(u32),
    #[error("malformed extension: {0}")]
    MalformedExtension(String),
    #[error("conflicting extension: {0}")]
    ConflictingExtension(String),
    #[error("question text is empty")]
    EmptyText,
    #[error("no registered question verb to replace")]
    NoVerbFound,
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("completion client failure: {0}")]
    ClientFailure(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code, used in JSON error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownSubpoint(_) => "UnknownSubpoint",
            Error::UnknownOutcome(_) => "UnknownOutcome",
            Error::MalformedExtension(_) => "MalformedExtension",
            Error::ConflictingExtension(_) => "ConflictingExtension",
            Error::EmptyText => "EmptyText",
            Error::NoVerbFound => "NoVerbFound",
            Error::InvalidRequest(_) => "InvalidRequest",
            Error::ClientFailure(_) => "ClientFailure",
            Error::Schema(_) => "SchemaError",
            Error::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

/// `fs::read_to_string` with the path folded into the error message.
pub(crate) fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|err| Error::Io(format!("{}: {err}", path.display())))
}
