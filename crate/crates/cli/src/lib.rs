//! Command-line front end: experiment configs, dispatch and report output.

pub mod config;
pub mod error;
pub mod report;
pub mod run;

pub use config::{Command, ExperimentConfig, Format};
pub use error::{CliError, ErrorCode};
pub use report::{emit, Report};
pub use run::run;
