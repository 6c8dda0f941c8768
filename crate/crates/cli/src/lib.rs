//! Experiment harness for featherlink: JSON configs, training and evaluation
//! subcommands, and the figure presets. Outputs are plot-ready CSV files,
//! each with a JSON sidecar holding the resolved configuration and seed.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod experiment;
pub mod output;
pub mod presets;
pub mod selftest;

pub use commands::{run, Cli};
pub use config::{ConfigError, EvalConfig, ExperimentConfig};
pub use presets::{reproduce, Overrides, FIGURES};
