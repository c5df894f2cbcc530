//! Defaults read from a flat key = value file (valid TOML).

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

pub const CONFIG_ENV: &str = "EISCONG_CONFIG";

#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Config {
    pub q_precision: Option<usize>,
    pub p_precision: Option<u32>,
    pub m_max: Option<u32>,
    pub jobs: Option<usize>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).context("malformed config")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// The --config flag wins over the environment variable; neither means defaults.
    pub fn resolve(flag: Option<&Path>) -> Result<Self> {
        let path = flag.map(Path::to_path_buf).or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        match path {
            Some(p) => Self::load(&p),
            None => Ok(Self::default()),
        }
    }

    pub fn p_precision(&self) -> u32 {
        self.p_precision.unwrap_or(12)
    }

    pub fn m_max(&self) -> u32 {
        self.m_max.unwrap_or(8)
    }
}
