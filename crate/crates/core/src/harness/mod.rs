//! Experiment orchestration: TOML configuration with CLI overrides,
//! concurrent parameter sweeps, and bit-stable CSV/JSON artifacts.

mod config;
mod export;
mod run;

pub use config::{
    effective_workers, BootstrapSection, ExperimentConfig, FitSection, LedgerSection, Mode,
    SemigroupSection, SolverSection, SweepSection,
};
pub use export::{export_norm_series, fmt_f64, import_norm_series, write_csv, write_json};
pub use run::{exit_code, run};
