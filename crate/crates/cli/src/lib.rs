//! Command-line front end for `rlnc-tdd`: scenario files, policy tables,
//! evaluation and simulation sweeps written as CSV.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use config::{ObjectiveChoice, Point, Scenario, SimulationSection, Sweep, SweepVariable};
pub use error::{CliError, Result};
pub use table::{optimal_policy, params_hash, PolicyTable, CACHE_ENV};
