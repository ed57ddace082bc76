use thiserror::Error as ThisError;

/// Command failures carrying their process exit code: 1 for usage and
/// file/format problems, 2 for numerical failures, 3 for infeasible
/// generation requests.
#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("infeasible generation: {0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("json error: {e}"))
    }
}

impl From<ldm_sim::Error> for CliError {
    fn from(e: ldm_sim::Error) -> Self {
        match e {
            ldm_sim::Error::Generation(_) => CliError::Infeasible(e.to_string()),
            ldm_sim::Error::Io(_)
            | ldm_sim::Error::Parse(_)
            | ldm_sim::Error::Parameter(_)
            | ldm_sim::Error::Model(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<skewlr_decomp::Error> for CliError {
    fn from(e: skewlr_decomp::Error) -> Self {
        match e {
            skewlr_decomp::Error::Io(_)
            | skewlr_decomp::Error::Parse(_)
            | skewlr_decomp::Error::Parameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<spectral_est::Error> for CliError {
    fn from(e: spectral_est::Error) -> Self {
        match e {
            spectral_est::Error::Io(_)
            | spectral_est::Error::Parse(_)
            | spectral_est::Error::Parameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<topo_recon::Error> for CliError {
    fn from(e: topo_recon::Error) -> Self {
        match e {
            topo_recon::Error::Io(_) | topo_recon::Error::Parse(_) => {
                CliError::Usage(e.to_string())
            }
            topo_recon::Error::Parameter(m) | topo_recon::Error::Mismatch(m) => {
                CliError::Usage(m)
            }
        }
    }
}
