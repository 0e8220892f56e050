//! Link, coding and policy parameters shared by every layer.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

fn check_probability(field: &'static str, p: f64) -> Result<()> {
    if !(0.0..1.0).contains(&p) {
        return Err(invalid(field, format!("{p} is not in [0, 1)")));
    }
    Ok(())
}

fn check_positive(field: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(invalid(field, format!("{v} must be finite and > 0")));
    }
    Ok(())
}

/// Radio and channel description of a single point-to-point link.
///
/// Erasures are i.i.d. per packet. The ACK erasure probability must stay
/// below one, otherwise every transient state of the chain would become
/// absorbing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkParameters {
    data_rate: f64,
    propagation_delay: f64,
    transmit_power: f64,
    pkt_erasure: f64,
    ack_erasure: f64,
    bit_error_rate: Option<f64>,
}

impl LinkParameters {
    /// `data_rate` in bit/s, `propagation_delay` one-way in seconds,
    /// `transmit_power` in watts.
    pub fn new(
        data_rate: f64,
        propagation_delay: f64,
        transmit_power: f64,
        pkt_erasure: f64,
        ack_erasure: f64,
    ) -> Result<Self> {
        check_positive("data_rate", data_rate)?;
        check_positive("transmit_power", transmit_power)?;
        if !(propagation_delay.is_finite() && propagation_delay >= 0.0) {
            return Err(invalid(
                "propagation_delay",
                format!("{propagation_delay} must be finite and >= 0"),
            ));
        }
        check_probability("pkt_erasure", pkt_erasure)?;
        check_probability("ack_erasure", ack_erasure)?;
        Ok(Self {
            data_rate,
            propagation_delay,
            transmit_power,
            pkt_erasure,
            ack_erasure,
            bit_error_rate: None,
        })
    }

    /// Same radio, different erasure probabilities.
    pub fn with_erasures(&self, pkt_erasure: f64, ack_erasure: f64) -> Result<Self> {
        check_probability("pkt_erasure", pkt_erasure)?;
        check_probability("ack_erasure", ack_erasure)?;
        Ok(Self {
            pkt_erasure,
            ack_erasure,
            ..*self
        })
    }

    /// Records the bit error rate the erasure probabilities were derived from.
    pub fn with_bit_error_rate(mut self, ber: f64) -> Result<Self> {
        check_probability("bit_error_rate", ber)?;
        self.bit_error_rate = Some(ber);
        Ok(self)
    }

    pub fn data_rate(&self) -> f64 {
        self.data_rate
    }

    pub fn propagation_delay(&self) -> f64 {
        self.propagation_delay
    }

    pub fn transmit_power(&self) -> f64 {
        self.transmit_power
    }

    /// Data packet erasure probability `Pe`.
    pub fn pkt_erasure(&self) -> f64 {
        self.pkt_erasure
    }

    /// ACK erasure probability `Pe_ack`.
    pub fn ack_erasure(&self) -> f64 {
        self.ack_erasure
    }

    pub fn bit_error_rate(&self) -> Option<f64> {
        self.bit_error_rate
    }
}

/// Block and packet geometry.
///
/// A coded packet carries `header_bits`, then `block_size` coefficients of
/// `coeff_bits` each, then `payload_bits` of coded data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CodingParameters {
    block_size: usize,
    payload_bits: u64,
    header_bits: u64,
    coeff_bits: u32,
    ack_bits: u64,
}

impl CodingParameters {
    pub fn new(
        block_size: usize,
        payload_bits: u64,
        header_bits: u64,
        coeff_bits: u32,
        ack_bits: u64,
    ) -> Result<Self> {
        if block_size == 0 {
            return Err(invalid("block_size", "must be >= 1"));
        }
        if payload_bits == 0 {
            return Err(invalid("payload_bits", "must be >= 1"));
        }
        if header_bits == 0 {
            return Err(invalid("header_bits", "must be >= 1"));
        }
        if coeff_bits == 0 {
            return Err(invalid("coeff_bits", "must be >= 1"));
        }
        if ack_bits == 0 {
            return Err(invalid("ack_bits", "must be >= 1"));
        }
        Ok(Self {
            block_size,
            payload_bits,
            header_bits,
            coeff_bits,
            ack_bits,
        })
    }

    pub fn with_payload_bits(&self, payload_bits: u64) -> Result<Self> {
        Self::new(
            self.block_size,
            payload_bits,
            self.header_bits,
            self.coeff_bits,
            self.ack_bits,
        )
    }

    pub fn with_block_size(&self, block_size: usize) -> Result<Self> {
        Self::new(
            block_size,
            self.payload_bits,
            self.header_bits,
            self.coeff_bits,
            self.ack_bits,
        )
    }

    /// Number of source packets `M` in a block.
    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn payload_bits(&self) -> u64 {
        self.payload_bits
    }

    pub fn header_bits(&self) -> u64 {
        self.header_bits
    }

    /// Bits per coding coefficient; the field has `2^coeff_bits` elements.
    pub fn coeff_bits(&self) -> u32 {
        self.coeff_bits
    }

    pub fn ack_bits(&self) -> u64 {
        self.ack_bits
    }

    /// `h + n + g·M`
    pub fn packet_bits(&self) -> u64 {
        self.header_bits + self.payload_bits + u64::from(self.coeff_bits) * self.block_size as u64
    }
}

/// Durations and energies derived from a link and a packet geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedTiming {
    /// Transmission time of one coded packet.
    pub packet_time: f64,
    /// Transmission time of one ACK.
    pub ack_time: f64,
    /// Transmission energy of one coded packet.
    pub packet_energy: f64,
    /// Transmission energy of one ACK.
    pub ack_energy: f64,
    /// Idle window after a burst: one round trip plus the ACK itself.
    pub wait_time: f64,
    pub round_trip: f64,
}

impl DerivedTiming {
    pub fn new(link: &LinkParameters, coding: &CodingParameters) -> Self {
        let packet_time = coding.packet_bits() as f64 / link.data_rate;
        let ack_time = coding.ack_bits as f64 / link.data_rate;
        let round_trip = 2.0 * link.propagation_delay;
        Self {
            packet_time,
            ack_time,
            packet_energy: link.transmit_power * packet_time,
            ack_energy: link.transmit_power * ack_time,
            wait_time: round_trip + ack_time,
            round_trip,
        }
    }
}

/// Number of coded packets sent back-to-back in each state.
///
/// Entry `i - 1` holds `N_i`, the burst length used when the receiver still
/// misses `i` degrees of freedom. Every entry satisfies `N_i >= i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Policy(Vec<u64>);

impl Policy {
    pub fn new(packets: Vec<u64>) -> Result<Self> {
        if packets.is_empty() {
            return Err(Error::PolicyLength {
                policy: 0,
                block: 0,
            });
        }
        for (idx, &n) in packets.iter().enumerate() {
            let state = idx + 1;
            if n < state as u64 {
                return Err(Error::PolicyInfeasible { state, packets: n });
            }
        }
        Ok(Self(packets))
    }

    /// `N_i = i`: exactly as many packets as missing dofs.
    pub fn minimal(block_size: usize) -> Self {
        Self((1..=block_size as u64).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Burst length for state `i` (1-indexed).
    pub fn packets(&self, state: usize) -> u64 {
        self.0[state - 1]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub(crate) fn check_block(&self, coding: &CodingParameters) -> Result<()> {
        if self.0.len() != coding.block_size {
            return Err(Error::PolicyLength {
                policy: self.0.len(),
                block: coding.block_size,
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<u64>> for Policy {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Policy> for Vec<u64> {
    fn from(p: Policy) -> Self {
        p.0
    }
}
