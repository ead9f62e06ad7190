use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::suites::SUITES;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid_h: f64,
    pub horizon: usize,
    pub tol_sup: f64,
    pub tol_quad: f64,
    pub seed: u64,
    /// Suite ids; empty means every registered suite.
    pub suites: Vec<String>,
    pub output: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid_h: 1e-3,
            horizon: 20,
            tol_sup: 1e-3,
            tol_quad: 1e-6,
            seed: 20_240_601,
            suites: Vec::new(),
            output: PathBuf::from("report"),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if !(self.grid_h > 0.0 && self.grid_h <= 0.05) {
            return bad(format!("grid_h must lie in (0, 0.05], got {}", self.grid_h));
        }
        if self.horizon < 4 {
            return bad(format!("horizon must be at least 4, got {}", self.horizon));
        }
        if !(self.tol_sup > 0.0 && self.tol_quad > 0.0) {
            return bad("tolerances must be positive".into());
        }
        for s in &self.suites {
            if !SUITES.iter().any(|(id, _)| id == s) {
                return bad(format!("unknown suite id {s:?}"));
            }
        }
        Ok(())
    }

    /// Selected suite ids in registered order.
    pub fn selected(&self) -> Vec<&'static str> {
        SUITES
            .iter()
            .map(|(id, _)| *id)
            .filter(|id| self.suites.is_empty() || self.suites.iter().any(|s| s == id))
            .collect()
    }
}
