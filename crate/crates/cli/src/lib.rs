//! Config-driven experiment runner: parses a TOML experiment, runs the
//! requested tasks against `itframe`, and produces a JSON report plus
//! plot-ready CSV tables.

pub mod config;
pub mod output;
pub mod reconstruct;
pub mod report;
pub mod run;

pub use config::{ExperimentConfig, SignalSpec, Task, TranslateSpec};
pub use report::{Check, Report, TaskResult, TaskStatus};
pub use run::{run, RunError, RunOutput};
