//! Configuration, canned experiments and CSV/JSON output for the command-line front end.

mod commands;
mod config;
mod record;

pub use commands::{
    cmd_check, cmd_coarse_entropy, cmd_full_histories, cmd_sweep, least_squares_slope, sum_rule_defect,
    theorem1_residual, CheckReport, CHECK_TOLERANCE, SUPPORT_THRESHOLD, SWEEP_COLUMNS,
};
pub use config::{alternating, parse_list, ConfigOverrides, Experiment, OutputFormat, RunConfig};
pub use record::{Cell, ResultRecord};

use crate::error::Result;

/// Runs `cfg.experiment`. For `check`, failed invariants are listed in the
/// second element.
pub fn run(cfg: &RunConfig) -> Result<(ResultRecord, Vec<String>)> {
    match cfg.experiment {
        Experiment::Check => cmd_check(cfg).map(|r| (r.record, r.failures)),
        Experiment::CoarseEntropy => cmd_coarse_entropy(cfg).map(|r| (r, Vec::new())),
        Experiment::FullHistories => cmd_full_histories(cfg).map(|r| (r, Vec::new())),
        Experiment::Sweep => cmd_sweep(cfg).map(|r| (r, Vec::new())),
    }
}
