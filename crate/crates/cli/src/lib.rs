//! Command-line driver for the double-cone simulations and spectra.
//!
//! The binary `cone` resolves a [`RunConfig`] from flags, a flat TOML file
//! and the environment, computes a [`Table`] and writes it as CSV or JSON.

pub mod config;
pub mod format;
pub mod run;

use thiserror::Error;

pub use config::{Format, Mode, RunConfig};
pub use run::{execute, run, Report, Table};

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid or missing setting; the message names the key.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("numerical failure: {0}")]
    Numerical(#[from] cone_core::Error),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}
