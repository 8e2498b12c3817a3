//! Command-line front end: simulation tables, figure data, oracle
//! comparisons and breaking-time reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use table::{Format, Table};
