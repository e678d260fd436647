//! Experiment front-end for the vivarium simulator.
//!
//! The library half of the `expcli` binary: named experiment presets,
//! configuration resolution (preset + file + command-line overrides),
//! seeded batch runs with per-run artifact directories, CSV analysis
//! exports over saved event logs, and the mutation random-walk null model.
//!
//! Every run directory is self-describing: it holds the fully-resolved
//! configuration (`resolved_config.toml`), the complete event log
//! (`events.jsonl`), derived metrics (`metrics.json`), and periodic
//! checkpoints. All analysis commands work purely from these files.

pub mod analysis;
pub mod loader;
pub mod nullmodel;
pub mod presets;
pub mod runner;

use thiserror::Error;
use vivarium_core::config::ConfigError;

/// Command failures, split by exit code: configuration problems exit
/// with 2, runtime failures with 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        CliError::Runtime(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}
