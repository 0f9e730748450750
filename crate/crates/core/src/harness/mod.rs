//! Reproducible experiment driver behind the `qdialogue` binary.

pub mod config;
pub mod experiment;
pub mod output;
pub mod selftest;
pub mod sweep;
pub mod tables;

pub use config::{ConfigBuilder, ExperimentConfig, OutputFormat, DEFAULT_OUTPUT_DIR, OUTPUT_DIR_ENV};
pub use experiment::{
    run_experiment, run_experiment_with, run_trial, Comparison, Execution, Relation, ResultsDocument, RESULTS_SCHEMA,
};
pub use selftest::{selftest, selftest_with, SelftestReport};
pub use sweep::{sweep, SweepParameter, SweepResult};
pub use tables::{formula_tables, FormulaTables};

use std::path::PathBuf;

use thiserror::Error;

use crate::adversary::AttackError;
use crate::analytics::AnalyticsError;
use crate::protocol::ProtocolError;

/// Exit status when every comparison is within tolerance.
pub const EXIT_PASS: u8 = 0;
/// Exit status when a statistical comparison or self-check failed.
pub const EXIT_COMPARISON_FAILED: u8 = 1;
/// Exit status for configuration and I/O errors.
pub const EXIT_CONFIG_ERROR: u8 = 2;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`")]
    InvalidValue { key: String, value: String },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error("control probability c = {0} is outside (0, 1)")]
    ControlProbability(f64),
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("n-pairs must be at least 1")]
    ZeroPairs,
    #[error("cannot read config {}: {source}", path.display())]
    ReadConfig { path: PathBuf, source: std::io::Error },
    #[error("cannot write output {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("sweep needs at least one value")]
    EmptySweep,
    #[error("cannot sweep `{0}`; expected c, n-pairs or beta2")]
    UnknownSweepParameter(String),
    #[error("serialization failed: {0}")]
    Serialize(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
}

impl HarnessError {
    pub fn exit_code(&self) -> u8 {
        EXIT_CONFIG_ERROR
    }
}
