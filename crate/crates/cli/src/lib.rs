//! Experiment plumbing behind the `dla` binary: configuration files,
//! snapshot persistence, analysis pipelines, the reference comparison
//! report and PGM rendering.

pub mod analyze;
pub mod config;
mod error;
pub mod grow;
pub mod render;
pub mod report;
pub mod snapshot;

pub use error::{CliError, Result};

/// Version string embedded in every results and report file.
pub const VERSION: &str = concat!("dla ", env!("CARGO_PKG_VERSION"));
