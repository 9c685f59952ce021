use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown point id `{0}`")]
    UnknownId(String),

    #[error("{function} is undefined at {value} (domain is {domain})")]
    Domain {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("malformed instance: {0}")]
    Parse(String),

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("function rejected by validation: {0}")]
    Inadmissible(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
