//! Library side of the `timebin` command-line tool.
//!
//! Each subcommand is a plain function taking parsed arguments and returning
//! an exit code, so the pipeline can be driven from tests without spawning a
//! process.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::run::{run_experiment, RunSummary};
pub use config::{ExperimentConfig, ExperimentFile, ModelTag, Overrides};
pub use error::{exit, CliError, CliResult};
