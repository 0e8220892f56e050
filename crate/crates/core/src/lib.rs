//! Energy and completion-time analysis of random linear network coding over
//! time-division-duplexed packet erasure links.
//!
//! The sender transmits bursts of coded packets and then listens for an ACK
//! carrying the number of degrees of freedom the receiver still misses. The
//! crate covers the Markov model of that protocol ([`markov`]), the mean
//! energy and time of a burst-length policy ([`analysis`]), optimal policies
//! ([`optimizer`]), a GF(2^g) network codec ([`codec`]) and a seeded Monte
//! Carlo simulator ([`simulator`]).
//!
//! With the default `parallel` feature, trials and sweeps run on rayon;
//! without it every loop runs sequentially and results are identical.

pub mod analysis;
pub mod codec;
pub mod error;
pub mod exec;
pub mod lambert;
pub mod markov;
pub mod optimizer;
pub mod params;
pub mod simulator;

pub use analysis::{
    energy_per_bit, erasures_from_ber, evaluate, expected_cost, expected_energy, expected_time,
    full_duplex_energy, full_duplex_time, Objective, PerformanceReport,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use lambert::lambert_w_minus1;
pub use markov::{log_binomial, transition_prob, transition_row};
pub use optimizer::{
    n1_closed_form, optimize, optimize_energy, optimize_time, ClosedForm, OptimizationResult,
};
pub use params::{CodingParameters, DerivedTiming, LinkParameters, Policy};

pub use simulator::{
    run_trials, run_trials_with, SimulationConfig, SimulationMode, SimulationResult,
};
