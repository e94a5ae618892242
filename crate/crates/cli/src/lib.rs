//! Config-driven experiment runner for the `dualflow` library.

pub mod cli;
pub mod config;
pub mod experiment;
pub mod geometry_check;

pub use cli::{main_with, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};
pub use config::{Construction, ExperimentConfig};
pub use experiment::{run, Outcome};
