use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("instance too large for exact oracle: {0}")]
    Size(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unknown formula id `{0}`")]
    UnknownFormula(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Self::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
