use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("lag {k} out of range for {n} series of length {len}")]
    LagOutOfRange { k: usize, n: usize, len: usize },

    #[error("evaluation point must lie on the unit circle, |z| = {0}")]
    NotUnitCircle(f64),

    #[error("ill-conditioned: {0}")]
    Conditioning(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
