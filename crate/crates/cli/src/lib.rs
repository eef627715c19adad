//! Command-line front end: builds quotient spectra, limit measures, the
//! Heisenberg zero-atom table and the nilpotent discontinuity demo from a
//! job description, and runs the acceptance checks.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use args::{run, Cli};
pub use config::JobConfig;
pub use error::CliError;
