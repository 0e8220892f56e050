//! Scenario files.
//!
//! A scenario is a JSON object in SI units:
//!
//! ```json
//! {
//!   "link": { "data_rate": 1.5e6, "propagation_delay": 0.125, "transmit_power": 1.0,
//!             "pkt_erasure": 0.5, "ack_erasure": 0.0 },
//!   "coding": { "block_size": 10, "payload_bits": 10000, "header_bits": 80,
//!               "coeff_bits": 20, "ack_bits": 100 },
//!   "sweep": { "variable": "Pe", "values": [1e-5, 0.25, 0.5, 0.8] },
//!   "objective": "both",
//!   "simulation": { "trials": 100000, "seed": 1, "mode": "model-faithful" }
//! }
//! ```
//!
//! `link.bit_error_rate` may replace both erasure probabilities; they are
//! then derived from the packet and ACK lengths at every sweep point.

use std::path::Path;

use rlnc_tdd::{
    erasures_from_ber, CodingParameters, LinkParameters, Objective, SimulationConfig,
    SimulationMode,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    link: Option<RawLink>,
    coding: Option<RawCoding>,
    sweep: Option<Sweep>,
    objective: Option<ObjectiveChoice>,
    simulation: Option<SimulationSection>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLink {
    data_rate: Option<f64>,
    propagation_delay: Option<f64>,
    transmit_power: Option<f64>,
    pkt_erasure: Option<f64>,
    ack_erasure: Option<f64>,
    bit_error_rate: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoding {
    block_size: Option<usize>,
    payload_bits: Option<u64>,
    header_bits: Option<u64>,
    coeff_bits: Option<u32>,
    ack_bits: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    Pe,
    #[serde(rename = "n")]
    PayloadBits,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveChoice {
    Energy,
    Time,
    #[default]
    Both,
}

impl ObjectiveChoice {
    pub fn objectives(self) -> Vec<Objective> {
        match self {
            ObjectiveChoice::Energy => vec![Objective::Energy],
            ObjectiveChoice::Time => vec![Objective::Time],
            ObjectiveChoice::Both => vec![Objective::Energy, Objective::Time],
        }
    }
}

/// Simulation settings; every field may also come from the command line.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub mode: Option<SimulationMode>,
    pub field_bits: Option<u32>,
}

impl SimulationSection {
    pub fn resolve(&self) -> Result<SimulationConfig> {
        let trials = self
            .trials
            .ok_or_else(|| CliError::config("simulation.trials", "missing"))?;
        let seed = self
            .seed
            .ok_or_else(|| CliError::config("simulation.seed", "missing"))?;
        let mode = self
            .mode
            .ok_or_else(|| CliError::config("simulation.mode", "missing"))?;
        let mut cfg = SimulationConfig::new(trials, seed, mode)
            .map_err(|e| CliError::from_params("simulation", e))?;
        if let Some(bits) = self.field_bits {
            if !rlnc_tdd::codec::field::SUPPORTED_BITS.contains(&bits) {
                return Err(CliError::config(
                    "simulation.field_bits",
                    format!(
                        "{bits} not one of {:?}",
                        rlnc_tdd::codec::field::SUPPORTED_BITS
                    ),
                ));
            }
            cfg = cfg.with_field_bits(bits);
        }
        Ok(cfg)
    }
}

/// Where the erasure probabilities come from.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Erasures {
    Given { pkt: Option<f64>, ack: f64 },
    FromBer(f64),
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    data_rate: f64,
    propagation_delay: f64,
    transmit_power: f64,
    erasures: Erasures,
    coding: CodingParameters,
    pub sweep: Option<Sweep>,
    pub objective: ObjectiveChoice,
    pub simulation: SimulationSection,
}

/// One parameter set of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub link: LinkParameters,
    pub coding: CodingParameters,
}

fn required<T>(value: Option<T>, field: &str) -> Result<T> {
    value.ok_or_else(|| CliError::config(field, "missing"))
}

impl Scenario {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawScenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "config".into() } else { path };
            CliError::config(field, e.into_inner().to_string())
        })?;
        Self::validate(raw)
    }

    fn validate(raw: RawScenario) -> Result<Self> {
        let link = required(raw.link, "link")?;
        let coding = required(raw.coding, "coding")?;
        let coding = CodingParameters::new(
            required(coding.block_size, "coding.block_size")?,
            required(coding.payload_bits, "coding.payload_bits")?,
            required(coding.header_bits, "coding.header_bits")?,
            required(coding.coeff_bits, "coding.coeff_bits")?,
            required(coding.ack_bits, "coding.ack_bits")?,
        )
        .map_err(|e| CliError::from_params("coding", e))?;

        let sweep_pe = matches!(&raw.sweep, Some(s) if s.variable == SweepVariable::Pe);
        let erasures = match link.bit_error_rate {
            Some(ber) => {
                for (value, name) in [
                    (link.pkt_erasure, "link.pkt_erasure"),
                    (link.ack_erasure, "link.ack_erasure"),
                ] {
                    if value.is_some() {
                        return Err(CliError::config(
                            name,
                            "cannot be combined with link.bit_error_rate",
                        ));
                    }
                }
                if sweep_pe {
                    return Err(CliError::config(
                        "sweep.variable",
                        "Pe cannot be swept when link.bit_error_rate sets it",
                    ));
                }
                Erasures::FromBer(ber)
            }
            None => {
                let pkt = if sweep_pe {
                    None
                } else {
                    Some(required(link.pkt_erasure, "link.pkt_erasure")?)
                };
                Erasures::Given {
                    pkt,
                    ack: required(link.ack_erasure, "link.ack_erasure")?,
                }
            }
        };

        if let Some(sweep) = &raw.sweep {
            if sweep.values.is_empty() {
                return Err(CliError::config("sweep.values", "empty"));
            }
            for (k, &v) in sweep.values.iter().enumerate() {
                let ok = match sweep.variable {
                    SweepVariable::Pe => (0.0..1.0).contains(&v),
                    SweepVariable::PayloadBits => {
                        v >= 1.0 && v.fract() == 0.0 && v <= u64::MAX as f64
                    }
                };
                if !ok {
                    let domain = match sweep.variable {
                        SweepVariable::Pe => "a probability in [0, 1)",
                        SweepVariable::PayloadBits => "a positive whole number of bits",
                    };
                    return Err(CliError::config(
                        format!("sweep.values[{k}]"),
                        format!("{v} is not {domain}"),
                    ));
                }
            }
        }

        let scenario = Scenario {
            data_rate: required(link.data_rate, "link.data_rate")?,
            propagation_delay: required(link.propagation_delay, "link.propagation_delay")?,
            transmit_power: required(link.transmit_power, "link.transmit_power")?,
            erasures,
            coding,
            sweep: raw.sweep,
            objective: raw.objective.unwrap_or_default(),
            simulation: raw.simulation.unwrap_or_default(),
        };
        // surface range errors now rather than at the first sweep point
        scenario.points()?;
        Ok(scenario)
    }

    pub fn block_size(&self) -> usize {
        self.coding.block_size()
    }

    /// Parameter sets in sweep order; a single point without a sweep.
    pub fn points(&self) -> Result<Vec<Point>> {
        match &self.sweep {
            None => Ok(vec![self.point(None, self.coding)?]),
            Some(sweep) => sweep
                .values
                .iter()
                .map(|&v| match sweep.variable {
                    SweepVariable::Pe => self.point(Some(v), self.coding),
                    SweepVariable::PayloadBits => {
                        let coding = self
                            .coding
                            .with_payload_bits(v as u64)
                            .map_err(|e| CliError::from_params("sweep", e))?;
                        self.point(None, coding)
                    }
                })
                .collect(),
        }
    }

    fn point(&self, pe: Option<f64>, coding: CodingParameters) -> Result<Point> {
        let (pkt, ack, ber) = match self.erasures {
            Erasures::Given { pkt, ack } => {
                let pkt = pe.or(pkt).expect("validated: Pe is given or swept");
                (pkt, ack, None)
            }
            Erasures::FromBer(ber) => {
                let (pkt, ack) = erasures_from_ber(ber, &coding)
                    .map_err(|e| CliError::config("link.bit_error_rate", e.to_string()))?;
                (pkt, ack, Some(ber))
            }
        };
        let mut link = LinkParameters::new(
            self.data_rate,
            self.propagation_delay,
            self.transmit_power,
            pkt,
            ack,
        )
        .map_err(|e| CliError::from_params("link", e))?;
        if let Some(ber) = ber {
            link = link
                .with_bit_error_rate(ber)
                .map_err(|e| CliError::from_params("link", e))?;
        }
        Ok(Point { link, coding })
    }
}
