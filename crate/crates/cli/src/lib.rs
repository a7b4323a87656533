//! Batch experiment runner for the split-model bit-commitment simulator.
//!
//! Wraps the core crate in reproducible, machine-readable experiments:
//! bound sweeps, protocol simulations, attack evaluations, no-signalling
//! table checks and the composability demonstration. Identical
//! configurations produce byte-identical output files.

pub mod commands;
pub mod config;
pub mod io;

pub use commands::{EXIT_ERROR, EXIT_OK, EXIT_VIOLATION};
pub use config::{ExperimentConfig, OutputFormat, ProtocolKind, SCHEMA_VERSION};
pub use io::{AttackSummary, RunSummary};
