//! Configuration handling and commands behind the `ssf` binary.

pub mod cli;
pub mod commands;
pub mod config;

pub use cli::{run, Cli};
pub use commands::Outcome;
pub use config::{LoadedConfig, RunConfig};
