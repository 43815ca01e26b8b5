//! File formats and the command pipeline around `nssp-core`.

pub mod checkpoint;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{cmd_check, cmd_diagnose, cmd_simulate, cmd_superpose, Options, Status};
pub use config::RunConfig;
pub use error::CliError;
