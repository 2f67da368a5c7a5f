//! Configuration, pipelines and CSV output of the `fracterm` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use pipeline::{run, validate, Command, RunOptions, RunSummary};
