//! Experiment harness around `quantalab-core`: a small config format, a
//! registry of named experiments with their assertion lists, CSV and JSON
//! artifacts, and a rustfft transform backend.

// `!(x > 0.0)` is how parameter checks reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;

pub mod config;
pub mod experiments;
pub mod fft;
pub mod output;
pub mod run;
pub mod wavefile;

pub use config::{ExperimentConfig, ExperimentKind, Params};
pub use error::LabError;
pub use experiments::{registry, Assertion, Experiment, Outcome};
pub use output::{Cell, Table};
pub use run::{execute, run, run_config, RunManifest, RunOverrides};
