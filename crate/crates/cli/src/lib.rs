//! Command-line front end: scenario generation, simulation, training, and
//! dominance checks, with JSON/CSV formats for everything that crosses the
//! process boundary.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod files;
pub mod logging;

pub use commands::{cmd_check, cmd_gen, cmd_simulate, cmd_train, Proposition, TrainTarget};
pub use error::{CliError, CliResult};
