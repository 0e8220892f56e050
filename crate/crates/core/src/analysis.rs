//! Mean energy and mean completion time of a policy, plus the full-duplex
//! reference scheme.
//!
//! Both TDD metrics follow the same first-step recursion. A round in state
//! `i` costs `N_i·E_p + E_ack` joules and `N_i·T_p + T_w` seconds; only the
//! per-round cost differs between the two.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markov::{ln_progress_weight, one_minus_pow};
use crate::params::{CodingParameters, DerivedTiming, LinkParameters, Policy};

/// Quantity a policy is scored (or optimized) against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Mean transmit energy, joules.
    Energy,
    /// Mean completion time, seconds.
    Time,
}

impl Objective {
    /// Cost of one round that sends `packets` coded packets and waits for an ACK.
    pub fn round_cost(self, packets: u64, timing: &DerivedTiming) -> f64 {
        let n = packets as f64;
        match self {
            Objective::Energy => n * timing.packet_energy + timing.ack_energy,
            Objective::Time => n * timing.packet_time + timing.wait_time,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Energy => "energy",
            Objective::Time => "time",
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Expected cost-to-absorption from state `i` when the burst length there is
/// `packets` and the costs of the lower states are already known.
///
/// `lower[j - 1]` holds the cost from state `j`, for `j < i`.
pub(crate) fn state_cost(
    i: usize,
    packets: u64,
    round_cost: f64,
    link: &LinkParameters,
    lower: &[f64],
) -> f64 {
    debug_assert_eq!(lower.len(), i - 1);
    let pe = link.pkt_erasure();
    let progress = one_minus_pow(pe, packets);
    let first = round_cost / ((1.0 - link.ack_erasure()) * progress);

    // max-shifted log-sum-exp of weight_j + ln(cost_j)
    let mut shift = f64::NEG_INFINITY;
    let terms: Vec<f64> = (1..i)
        .map(|j| {
            let t = ln_progress_weight(i, j, packets, pe) + lower[j - 1].ln();
            shift = shift.max(t);
            t
        })
        .collect();
    if shift == f64::NEG_INFINITY {
        return first;
    }
    let scaled: f64 = terms.iter().map(|t| (t - shift).exp()).sum();
    first + (shift + scaled.ln()).exp() / progress
}

fn recursion(
    policy: &Policy,
    link: &LinkParameters,
    coding: &CodingParameters,
    objective: Objective,
) -> Result<Vec<f64>> {
    policy.check_block(coding)?;
    let timing = DerivedTiming::new(link, coding);
    let mut costs = Vec::with_capacity(policy.len());
    for i in 1..=policy.len() {
        let packets = policy.packets(i);
        if packets < i as u64 {
            return Err(Error::PolicyInfeasible { state: i, packets });
        }
        let round = objective.round_cost(packets, &timing);
        let c = state_cost(i, packets, round, link, &costs);
        costs.push(c);
    }
    Ok(costs)
}

/// Mean energy to finish the block from each state, `E_1..E_M`.
pub fn expected_energy(
    policy: &Policy,
    link: &LinkParameters,
    coding: &CodingParameters,
) -> Result<Vec<f64>> {
    recursion(policy, link, coding, Objective::Energy)
}

/// Mean completion time from each state, `T_1..T_M`.
pub fn expected_time(
    policy: &Policy,
    link: &LinkParameters,
    coding: &CodingParameters,
) -> Result<Vec<f64>> {
    recursion(policy, link, coding, Objective::Time)
}

/// Per-state costs under either objective.
pub fn expected_cost(
    policy: &Policy,
    link: &LinkParameters,
    coding: &CodingParameters,
    objective: Objective,
) -> Result<Vec<f64>> {
    recursion(policy, link, coding, objective)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerformanceReport {
    pub per_state_energy: Vec<f64>,
    pub per_state_time: Vec<f64>,
    pub total_energy: f64,
    pub total_time: f64,
    /// `E_M / (M·n)`
    pub energy_per_bit: f64,
}

/// Energy and time of `policy`, starting from a fully missing block.
pub fn evaluate(
    policy: &Policy,
    link: &LinkParameters,
    coding: &CodingParameters,
) -> Result<PerformanceReport> {
    let per_state_energy = expected_energy(policy, link, coding)?;
    let per_state_time = expected_time(policy, link, coding)?;
    let total_energy = *per_state_energy.last().expect("block size >= 1");
    let total_time = *per_state_time.last().expect("block size >= 1");
    Ok(PerformanceReport {
        energy_per_bit: energy_per_bit(total_energy, coding),
        per_state_energy,
        per_state_time,
        total_energy,
        total_time,
    })
}

pub fn energy_per_bit(total_energy: f64, coding: &CodingParameters) -> f64 {
    total_energy / (coding.block_size() as f64 * coding.payload_bits() as f64)
}

/// Mean energy of the full-duplex scheme: the sender streams until the
/// receiver's ACK makes it back, and the receiver repeats ACKs for half a
/// round trip.
pub fn full_duplex_energy(link: &LinkParameters, coding: &CodingParameters) -> f64 {
    let t = DerivedTiming::new(link, coding);
    let m = coding.block_size() as f64;
    t.round_trip * t.packet_energy / t.packet_time
        + t.round_trip * t.ack_energy / (2.0 * t.ack_time)
        + m * t.packet_energy / (1.0 - link.pkt_erasure())
        + t.ack_energy / (1.0 - link.ack_erasure())
}

/// Mean completion time of the full-duplex scheme.
pub fn full_duplex_time(link: &LinkParameters, coding: &CodingParameters) -> f64 {
    let t = DerivedTiming::new(link, coding);
    streaming_time(coding.block_size(), &t, link)
}

fn streaming_time(block: usize, t: &DerivedTiming, link: &LinkParameters) -> f64 {
    block as f64 * t.packet_time / (1.0 - link.pkt_erasure())
        + t.round_trip
        + t.ack_time / (1.0 - link.ack_erasure())
}

/// Packet and ACK erasure probabilities for i.i.d. bit errors, where a single
/// flipped bit erases the whole packet.
pub fn erasures_from_ber(ber: f64, coding: &CodingParameters) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&ber) {
        return Err(Error::Domain(format!("bit error rate {ber} not in [0, 1)")));
    }
    let survive = (-ber).ln_1p();
    let erase = |bits: u64| -(bits as f64 * survive).exp_m1();
    Ok((erase(coding.packet_bits()), erase(coding.ack_bits())))
}
