//! Command-line experiments for `feller-core`: JSON configuration, CSV path
//! artifacts, seeded parallel ensembles and JSON reports.

pub mod commands;
pub mod config;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod report;

pub use commands::{Context, Outcome};
pub use config::{Experiment, ExperimentConfig};
pub use error::{CliError, CliResult};
