//! Configuration files, tabulated distributions, CSV output and the
//! experiment runner behind the `multimode` command.

pub mod config;
mod error;
pub mod output;
pub mod runner;
pub mod scan;
pub mod tabulated;

pub use config::{load_config, parse_config, Evaluation, ExperimentConfig};
pub use error::{Result, RunError};
pub use output::{ResultRow, Table};
pub use runner::{oracle_check, run, RunOptions, RunReport, ORACLE_TOLERANCE};
pub use scan::{overlap_scan, ScanRow};
