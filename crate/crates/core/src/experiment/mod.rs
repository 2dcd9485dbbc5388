//! Batch experiments: configuration, table and phase-transition runners,
//! output formats and the built-in self test.

pub mod config;
pub mod formats;
pub mod pipeline;
pub mod runner;
pub mod selftest;

pub use config::{load_config, parse_config, Classifier, ExperimentConfig, PhaseGrid};
pub use formats::{
    encode_csv, encode_pgm, read_csv, read_dataset, read_pgm, write_csv, write_dataset, write_pgm, ResultRow,
};
pub use runner::{run_experiment, run_phase_transition, PhaseResult};
pub use selftest::{selftest, SelftestOptions, SelftestReport};
