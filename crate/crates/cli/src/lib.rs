//! Batch experiment runner for momap-core: verification suites, Kirwan flow,
//! Hessian spectra, stabilizer decompositions and cocycle certification.

pub mod commands;
pub mod config;
pub mod output;
pub mod registry;
pub mod report;
pub mod suites;

pub use commands::{run, run_suites, Command};
pub use suites::Suite;
pub use config::{ExampleId, ExperimentConfig};
pub use report::{ExperimentReport, Status};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("refused: {0}")]
    Refusal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Refusal(_) => 3,
        }
    }
}

/// Process exit code for a finished report.
pub fn exit_code(report: &ExperimentReport) -> i32 {
    match report.status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Refused => 3,
    }
}
