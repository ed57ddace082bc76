use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid model: {0}")]
    Model(String),

    #[error("evaluation point must lie on the unit circle, |z| = {0}")]
    NotUnitCircle(f64),

    #[error("ill-conditioned: {0}")]
    Conditioning(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("simulation failed: {0}")]
    Simulation(String),

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
