//! Command-line front end for the `qgt_core` library.

pub mod args;
pub mod config;
pub mod error;
pub mod output;
pub mod region;
pub mod run;

pub use config::{parse_config, RunConfig};
pub use error::CliError;
