//! Scenario files, result tables and subcommands of the `dpe-multipath` command-line tool.

pub mod bundled;
pub mod commands;
pub mod error;
pub mod report;
pub mod scenario_file;
pub mod table;

pub use error::{CliError, CliResult};
