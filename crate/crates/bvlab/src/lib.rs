//! Command-line driver and file formats for `bvlab-core`.
//!
//! [`cli::run`] parses arguments, runs one experiment and returns its
//! [`report::Report`]; the binary prints it as JSON and maps the verdicts
//! to an exit code.

pub mod cli;
mod cmd;
pub mod error;
pub mod formats;
pub mod inputs;
pub mod report;

pub use error::CliError;
pub use report::Report;
