//! Replicated experiments, sweeps, analytic curves and their CSV/JSON output.

mod config;
pub mod emit;
mod experiment;
mod validation;

pub use config::{LambdaBasis, ScenarioConfig};
pub use experiment::{
    compare, mean_curve, run_experiment, simulate_once, simulate_once_logged, sweep, theory, ExperimentResult, Summary,
    SweepAxis,
};
pub use validation::{validate, ValidationReport};
