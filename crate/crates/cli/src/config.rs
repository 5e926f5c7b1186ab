//! Optional TOML config file. Every field can also be given as a flag, and
//! flags take precedence.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

use crate::UsageError;

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Grid spec, either `lo:hi:count` or a comma-separated list.
    pub grid: Option<String>,
    pub family: Option<String>,
    pub schemes: Option<Vec<String>>,
    pub columns: Option<Vec<String>>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub cases: Option<usize>,
    #[serde(default)]
    pub bounds: BoundsConfig,
    #[serde(default)]
    pub mc: McSection,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub n1_max: Option<usize>,
    pub n2_max: Option<usize>,
    pub n3_max: Option<usize>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    pub samples: Option<u64>,
    pub tolerance_sigmas: Option<f64>,
}

pub fn load(path: Option<&Path>) -> anyhow::Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).map_err(|e| UsageError(format!("config {}: {e}", path.display())).into())
}
