//! Config-driven batch front end. Every command writes UTF-8 CSV (or
//! Markdown for the reconciliation report) into an output directory.

mod commands;
pub mod config;
pub mod format;
pub mod reconcile;

pub use commands::{
    cmd_actuation, cmd_all, cmd_reconcile, cmd_redistribute, cmd_squat, cmd_stairs, design_peaks,
    redistribution_file_name, squat_rows, CliError, ACTUATION_HEADER, COMPARISON_HEADER, REDISTRIBUTION_HEADER,
    SQUAT_HEADER, STAIRS_HEADER, STAIR_PEAKS_HEADER,
};
pub use config::{ConfigError, ScenarioConfig};
pub use reconcile::{reconcile, render_markdown, ReconStatus, Reconciliation};
