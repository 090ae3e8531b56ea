//! File formats, diagrams and subcommands behind the `qsynth` binary.

pub mod commands;
pub mod diagram;
pub mod error;
pub mod files;
pub mod json;

pub use error::CliError;
pub use files::{GateName, GateSpecFile, PhasePolicy, ProgramFile};
