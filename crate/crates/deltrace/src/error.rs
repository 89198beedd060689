pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("divisibility: {0}")]
    Divisibility(String),
    #[error("invalid argument: {0}")]
    InvalidArg(String),
    #[error("exact mode limit exceeded: {0}")]
    SizeLimit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl From<std::io::Error> for Error {
    fn from(source: std::io::Error) -> Self {
        Error::Io {
            path: "<output>".into(),
            source,
        }
    }
}
