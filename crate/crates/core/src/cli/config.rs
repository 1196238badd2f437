//! Configuration file (TOML) and environment overrides.
//!
//! ```toml
//! cache_dir = "/var/tmp/cartier-cache"
//!
//! [budget]
//! max_pairs = 100000
//! e_max = 10
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::budget::Budget;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub budget: Budget,
    pub cache_dir: Option<PathBuf>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads `path` when given, then applies `CARTIER_LAB_*` variables.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                Config::from_toml(&text)?
            }
            None => Config::default(),
        };
        config.budget = config.budget.with_env_overrides()?;
        if let Ok(dir) = std::env::var("CARTIER_LAB_CACHE_DIR") {
            config.cache_dir = Some(PathBuf::from(dir));
        }
        Ok(config)
    }
}
