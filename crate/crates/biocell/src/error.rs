use std::fmt;

/// Error type shared by the model, the engines and the ingest paths.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A model or run parameter is outside its documented range.
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParam {
        field: &'static str,
        message: String,
    },

    /// The request is outside the operation's domain (e.g. asking for a
    /// fraction of a steady-state power that does not exist).
    #[error("{0}")]
    Domain(String),

    /// Substituting an axis value into the base parameters produced an
    /// invalid set; carries the offending cell coordinates.
    #[error("sweep cell ({y_name}={y_value}, {x_name}={x_value}): {source}")]
    SweepCell {
        x_name: String,
        x_value: f64,
        y_name: String,
        y_value: f64,
        #[source]
        source: Box<Error>,
    },

    /// A record file failed to ingest; names the offending line and column.
    #[error("csv line {line}, column `{column}`: {message}")]
    Ingest {
        line: u64,
        column: String,
        message: String,
    },

    /// Engine name not present in the registry.
    #[error("unknown engine `{name}` (available: {available})")]
    UnknownEngine { name: String, available: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, message: impl fmt::Display) -> Self {
        Error::InvalidParam {
            field,
            message: message.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
