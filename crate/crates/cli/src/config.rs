//! Pipeline configuration file: one JSON document supplying defaults that
//! individual command-line flags may override.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct GeneratorSection {
    pub n: Option<usize>,
    pub n_h: Option<usize>,
    pub avg_degree: Option<f64>,
    pub gain_min: Option<f64>,
    pub gain_max: Option<f64>,
    pub max_attempts: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    /// Model file to load instead of generating one.
    pub model: Option<PathBuf>,
    pub generator: GeneratorSection,
    /// Unit-circle angles (radians) for spectral evaluation.
    pub frequencies: Vec<f64>,
    /// Sweep grid spacing.
    pub epsilon: Option<f64>,
    /// Support threshold for reconstruction.
    pub tau: Option<f64>,
    /// Relative zero tolerance for sweep flat regions.
    pub zero_tol: Option<f64>,
    pub n_samples: Option<usize>,
    /// Correlogram truncation order.
    pub p: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let config: PipelineConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load_opt(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(Self::default()),
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps <= 0.5) {
                return Err(CliError::Usage(format!("epsilon must lie in (0, 0.5], got {eps}")));
            }
        }
        for (name, v) in [("tau", self.tau), ("zero_tol", self.zero_tol)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
                }
            }
        }
        Ok(())
    }

    /// First configured frequency, falling back to the showcase angle 3π/8.
    pub fn default_frequency(&self) -> f64 {
        self.frequencies.first().copied().unwrap_or(3.0 * PI / 8.0)
    }
}
