//! Library side of the `snum` command-line tool: configuration, reports and
//! the five commands.

pub mod config;
pub mod report;
mod run;
mod verify;

pub use config::{Command, KRange, OutputFormat, Quantity, RunConfig};
pub use report::{Report, Row, Violation};
pub use run::{run, run_estimate, run_idnumbers, run_sweep, run_volume};
pub use verify::run_verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] snumbers::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// Usage, parse and domain problems all map to 2; violations are reported, not raised.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
