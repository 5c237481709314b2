//! Batch front end for the tetrablock verification library.
//!
//! A [`RunConfig`] selects one suite and its parameters; [`run_suite`]
//! returns a [`Report`] of ordered checks that renders as deterministic JSON
//! or as an aligned text table.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{ConfigError, OutputFormat, RunConfig, Suite};
pub use report::{Check, CheckValue, Report, Status, Summary};
pub use suites::run_suite;

/// Exit status for usage and configuration errors.
pub const EXIT_USAGE: u8 = 2;
