//! File formats, configuration and job execution for the `exdim` command.

pub mod config;
pub mod error;
pub mod formats;
pub mod jobs;
pub mod numfmt;

pub use config::JobConfig;
pub use error::{CliError, Result};
