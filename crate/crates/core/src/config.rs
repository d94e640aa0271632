//! Suite configuration: a small key-value file.
//!
//! ```text
//! seed = 0
//! cases = 200
//! max_denominator = 50
//! max_grid = 12
//! ```
//!
//! Missing keys take the defaults shown above; `max_components = 5` is also
//! accepted. `corrupt_oracle = true` is a test hook that deliberately breaks
//! one oracle so the failure path can be exercised end to end.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sample::SamplingConfig;

pub const SEED_ENV: &str = "SPINNERLAB_SEED";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid config: {0}")]
    Syntax(String),
    #[error("invalid {SEED_ENV} value `{0}`")]
    Seed(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: usize,
    pub max_denominator: u64,
    pub max_grid: usize,
    pub max_components: usize,
    pub corrupt_oracle: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, cases: 200, max_denominator: 50, max_grid: 12, max_components: 5, corrupt_oracle: false }
    }
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Syntax(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    /// Applies a seed override such as the value of [`SEED_ENV`].
    pub fn with_seed_override(mut self, seed: Option<&str>) -> Result<Self, ConfigError> {
        if let Some(s) = seed {
            self.seed = s.trim().parse().map_err(|_| ConfigError::Seed(s.to_string()))?;
        }
        Ok(self)
    }

    /// Sampling over denominators this small cannot distinguish much.
    pub fn low_coverage(&self) -> bool {
        self.max_denominator <= 1 || self.cases < 10
    }

    pub fn sampling(&self) -> SamplingConfig {
        SamplingConfig {
            seed: self.seed,
            cases: self.cases,
            max_denominator: self.max_denominator.max(1),
            max_components: self.max_components.max(1),
            corrupt_oracle: self.corrupt_oracle,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_partial_files() {
        assert_eq!(SuiteConfig::parse("").unwrap(), SuiteConfig::default());
        let c = SuiteConfig::parse("seed = 7\nmax_denominator = 1\n").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.cases, 200);
        assert!(c.low_coverage());
    }

    #[test]
    fn unknown_keys_and_bad_seed_rejected() {
        assert!(SuiteConfig::parse("sead = 1").is_err());
        assert!(SuiteConfig::default().with_seed_override(Some("x")).is_err());
        assert_eq!(SuiteConfig::default().with_seed_override(Some("42")).unwrap().seed, 42);
    }
}
