//! Experiment harness: config parsing, sweep/convergence execution, and
//! machine-readable result files.

mod config;
mod output;
mod run;

pub use config::{parse_config, Axis, ExperimentSpec, Method};
pub use output::{json_sibling, write_results, ResultRow};
pub use run::{run_convergence, run_sweep};
