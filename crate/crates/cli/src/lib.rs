//! Reproducible experiment harness over `chanlab`: the end-to-end
//! additivity-violation pipeline, the module-level experiments, and report
//! serialization.

use std::path::PathBuf;

use thiserror::Error;

pub mod config;
pub mod emit;
pub mod report;
pub mod run;

pub use config::{ExperimentConfig, GridPoint, OutputFormat};
pub use emit::emit_report;
pub use report::ExperimentReport;
pub use run::{run, run_named_experiment, run_violation_pipeline};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] chanlab::Error),

    #[error("non-finite value in report at {0}")]
    NonFinite(String),

    #[error("serialization failed: {0}")]
    Serialize(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    /// Process exit code: 1 invalid config, 2 numerical failure (budget,
    /// optimizer or other core error), 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            HarnessError::Core(_) | HarnessError::NonFinite(_) => 2,
            HarnessError::Serialize(_) | HarnessError::Io { .. } => 3,
        }
    }
}
