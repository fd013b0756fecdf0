use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied arguments outside an operation's domain.
    #[error("usage: {0}")]
    Usage(String),

    /// A coupling function or interconnection failed validation.
    #[error("validation failed at {path}: {message}")]
    Validation { path: String, message: String },

    /// The integrator produced a non-finite state.
    #[error("integration blew up at t = {time}")]
    BlowUp { time: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Error::Usage(message.into())
    }

    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. } | Error::Config(_) | Error::Json(_) => 1,
            Error::BlowUp { .. } | Error::Io(_) => 2,
            Error::Usage(_) => 64,
        }
    }
}
