//! Experiment driver: JSON configuration, Monte-Carlo sweeps, spectrum and
//! gain dumps, CSV tables.

pub mod config;
pub mod run;
pub mod table;

pub use config::ExperimentConfig;
pub use run::{run_gain, run_spectra, run_sweep, trial_rng, RunOptions};
pub use table::ResultTable;
