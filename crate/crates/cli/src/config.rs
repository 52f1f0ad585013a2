use std::fs;
use std::path::{Path, PathBuf};

use dsrec_core::index::Bm25Params;
use dsrec_core::lab::LabConfig;
use dsrec_core::query::QueryConfig;
use dsrec_core::rerank::RerankConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub publications: Option<PathBuf>,
    pub datasets: Option<PathBuf>,
    pub translations: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub clicks: Option<PathBuf>,
    pub candidates: Option<PathBuf>,
    pub index: Option<PathBuf>,
    pub runs: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Ranked datasets kept per publication.
    pub top_k: usize,
    pub paths: Paths,
    pub query: QueryConfig,
    pub bm25: Bm25Params,
    pub rerank: RerankConfig,
    pub lab: LabConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            top_k: 1000,
            paths: Paths::default(),
            query: QueryConfig::default(),
            bm25: Bm25Params::default(),
            rerank: RerankConfig::default(),
            lab: LabConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.top_k == 0 {
            return Err(CliError::usage("top_k must be at least 1"));
        }
        self.query.validate()?;
        self.rerank.validate()?;
        self.lab.validate()?;
        Ok(())
    }
}

/// A required path: the flag if given, otherwise the config entry.
pub fn require(flag: &Option<PathBuf>, configured: &Option<PathBuf>, name: &str) -> CliResult<PathBuf> {
    flag.clone()
        .or_else(|| configured.clone())
        .ok_or_else(|| CliError::usage(format!("missing --{name} (or paths.{name} in the config)")))
}
