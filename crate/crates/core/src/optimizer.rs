//! Optimal burst-length policies.
//!
//! The cost from state `i` depends on the burst length `N_i` and, with
//! non-negative weights, on the costs of the lower states. Minimizing the
//! lower states first therefore also minimizes every upper state, and the
//! `M`-dimensional problem splits into `M` one-dimensional integer searches
//! run in increasing state order.
//!
//! Nothing guarantees the cost is unimodal in `N_i`, so each search scans a
//! whole window `[i, bound]` and doubles the window while the running
//! minimum sits on its edge.

use serde::Serialize;

use crate::analysis::{state_cost, Objective};
use crate::error::{Error, Result};
use crate::lambert::lambert_w_minus1;
use crate::params::{CodingParameters, DerivedTiming, LinkParameters, Policy};

/// Largest window the search may grow to.
pub const MAX_SEARCH_BOUND: u64 = 1 << 20;

/// Candidates closer than this (relative) to the incumbent count as ties and
/// lose to the smaller burst.
const TIE_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub policy: Policy,
    pub kind: Objective,
    /// Optimal cost from each state, `1..=M`.
    pub objective_per_state: Vec<f64>,
    /// Optimal cost from state `M`.
    pub objective: f64,
    /// Whether the window for a state had to be widened.
    pub search_bound_hit: Vec<bool>,
}

/// Initial search window for state `i`.
pub fn initial_bound(state: usize, pkt_erasure: f64) -> u64 {
    let expected = (state as f64 / (1.0 - pkt_erasure)).ceil() as u64;
    (4 * expected).max(state as u64 + 64)
}

/// Recursive per-state minimization of `objective`.
pub fn optimize(
    link: &LinkParameters,
    coding: &CodingParameters,
    objective: Objective,
) -> Result<OptimizationResult> {
    let timing = DerivedTiming::new(link, coding);
    let block = coding.block_size();
    let mut costs: Vec<f64> = Vec::with_capacity(block);
    let mut packets = Vec::with_capacity(block);
    let mut widened = Vec::with_capacity(block);

    for i in 1..=block {
        let eval = |n: u64| state_cost(i, n, objective.round_cost(n, &timing), link, &costs);
        let mut bound = initial_bound(i, link.pkt_erasure()).min(MAX_SEARCH_BOUND);
        let mut best_n = i as u64;
        let mut best = eval(best_n);
        let mut next = best_n + 1;
        let mut grew = false;
        loop {
            for n in next..=bound {
                let v = eval(n);
                if v < best - TIE_TOLERANCE * best {
                    best = v;
                    best_n = n;
                }
            }
            if best_n < bound {
                break;
            }
            if bound >= MAX_SEARCH_BOUND {
                return Err(Error::UnboundedSearch { state: i, bound });
            }
            next = bound + 1;
            bound = (bound * 2).min(MAX_SEARCH_BOUND);
            grew = true;
        }
        costs.push(best);
        packets.push(best_n);
        widened.push(grew);
    }

    Ok(OptimizationResult {
        policy: Policy::new(packets)?,
        kind: objective,
        objective: costs[block - 1],
        objective_per_state: costs,
        search_bound_hit: widened,
    })
}

/// Policy minimizing mean energy.
pub fn optimize_energy(
    link: &LinkParameters,
    coding: &CodingParameters,
) -> Result<OptimizationResult> {
    optimize(link, coding, Objective::Energy)
}

/// Policy minimizing mean completion time.
pub fn optimize_time(
    link: &LinkParameters,
    coding: &CodingParameters,
) -> Result<OptimizationResult> {
    optimize(link, coding, Objective::Time)
}

/// Continuous minimizer of the single-dof energy cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForm {
    /// Stationary point of `E_1(N)` over real `N`.
    pub n_star: f64,
    /// `n_star`, raised to 1 when it falls below the feasible range.
    pub feasible: f64,
    pub clamped: bool,
}

/// Real-valued energy-optimal burst for state 1:
/// `N* = (1 + W_{-1}(-exp(-1 + ln(Pe)·E_ack/E_p))) / ln(Pe) - E_ack/E_p`.
///
/// Only state 1 has a closed form. The integer search stays authoritative;
/// this value is a cross-check and should bracket its answer.
pub fn n1_closed_form(link: &LinkParameters, coding: &CodingParameters) -> Result<ClosedForm> {
    let pe = link.pkt_erasure();
    if !(pe > 0.0 && pe < 1.0) {
        return Err(Error::Domain(format!(
            "closed form needs 0 < Pe < 1, got {pe}"
        )));
    }
    let timing = DerivedTiming::new(link, coding);
    let ratio = timing.ack_energy / timing.packet_energy;
    let ln_pe = pe.ln();
    let w = lambert_w_minus1(-(-1.0 + ln_pe * ratio).exp())?;
    let n_star = (1.0 + w) / ln_pe - ratio;
    let clamped = n_star < 1.0;
    Ok(ClosedForm {
        n_star,
        feasible: if clamped { 1.0 } else { n_star },
        clamped,
    })
}
