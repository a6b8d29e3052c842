//! Declarative experiments: TOML configs in, flat result records out.
//!
//! A config names an experiment kind, overrides any system parameter, and
//! fixes a master seed. Trials draw channels from seeds derived from that
//! master seed and run in parallel; records come back in a canonical order,
//! so the same config always produces the same bytes.

mod config;
mod experiments;
mod output;

pub use config::{Architecture, ExperimentConfig, ExperimentKind, OutputFormat, SweepParams, SystemParams};
pub use experiments::{loglog_fit, run_experiment, trial_seed};
pub use output::{emit_results, parse_results, read_results, write_results, ResultRecord, CSV_HEADER};
