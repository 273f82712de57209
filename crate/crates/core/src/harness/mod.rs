//! Scenario configuration, seeded parallel Monte-Carlo sweeps, presets and CSV output.

pub mod config;
pub mod oracle;
pub mod output;
pub mod presets;
pub mod seed;
pub mod sweep;
pub mod verify;

pub use config::{load_config, parse_config, ChannelModelConfig, ScenarioConfig};
pub use oracle::{format_oracle_table, mse_oracle_table, MseOracleRow};
pub use output::{diagnostics_path, parse_csv, to_csv_string, write_csv, write_diagnostics};
pub use presets::{figure_preset, FigurePreset};
pub use sweep::{
    run_power_sweep, run_power_sweep_with_workers, run_trial, DiagnosticRow, Experiment, Metric,
    SweepResult, SweepRow, TrialEntry, TrialOutcome, WorkerPool,
};
pub use verify::{run_verify, CheckOutcome};
