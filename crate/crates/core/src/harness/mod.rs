//! Monte-Carlo experiment runner: configuration, per-run pipelines,
//! parameter sweeps and CSV output.

mod config;
mod experiment;
mod output;

pub use config::{AttackKind, ExperimentConfig, Loss, CONFIG_KEYS};
pub use experiment::{
    run_experiment, run_one, summarize, sweep, wilson_interval, ExperimentResult, RunRecord,
    Summary, SWEEP_AXES,
};
pub use output::{render_csv, write_csv_atomic, Rows, AGGREGATE_ID, CSV_HEADER};
