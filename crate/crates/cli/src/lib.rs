//! Batch front end for the `envelope` solver: configuration parsing,
//! command dispatch and deterministic CSV output.

pub mod config;
pub mod run;

pub use config::{parse_config, ConfigError, ConfigErrorKind, RunConfig};
pub use run::{run, Command, RunError, SweepSpec, Table};
