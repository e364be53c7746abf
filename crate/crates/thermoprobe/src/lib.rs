//! Std companion of `thermoprobe-core`: TOML run configuration, parallel
//! sweeps and deterministic CSV output.

pub mod commands;
pub mod config;
pub mod selfcheck;
pub mod table;

pub use commands::{run, Command, CommandError, Outcome};
pub use config::{ConfigError, RunConfig};
pub use table::CsvTable;
