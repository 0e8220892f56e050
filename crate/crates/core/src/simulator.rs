//! Seeded Monte Carlo runs of the burst-then-listen protocol.
//!
//! Every trial starts with the whole block missing. A round sends `N_i`
//! coded packets, charges `N_i·E_p + E_ack` joules and `N_i·T_p + T_w`
//! seconds, and then the ACK either reaches the sender or is lost. The
//! modes differ only in what the receiver keeps across a lost ACK.
//!
//! Trial `k` draws from its own ChaCha8 stream (`seed`, stream `k`), so a
//! trial's outcome does not depend on which thread runs it or in what order.
//! Per-trial results are reduced in index order.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codec::{encode, random_block, Decoder, Field};
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::params::{CodingParameters, DerivedTiming, LinkParameters, Policy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimulationMode {
    /// A lost ACK wastes the whole round: the receiver's progress is
    /// forgotten, exactly as in the Markov chain.
    ModelFaithful,
    /// The receiver keeps every dof it collected; a lost ACK only delays
    /// the sender's view.
    PersistentDof,
    /// Real coded packets through a GF(2^g) decoder; the ACK reports
    /// `M - rank`.
    SymbolLevel,
}

impl SimulationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SimulationMode::ModelFaithful => "model-faithful",
            SimulationMode::PersistentDof => "persistent-dof",
            SimulationMode::SymbolLevel => "symbol-level",
        }
    }
}

impl FromStr for SimulationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "model-faithful" => Ok(SimulationMode::ModelFaithful),
            "persistent-dof" => Ok(SimulationMode::PersistentDof),
            "symbol-level" => Ok(SimulationMode::SymbolLevel),
            other => Err(invalid(
                "mode",
                format!("`{other}` is not model-faithful, persistent-dof or symbol-level"),
            )),
        }
    }
}

impl std::fmt::Display for SimulationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimulationConfig {
    pub trials: u64,
    pub seed: u64,
    pub mode: SimulationMode,
    /// Field width for symbol-level runs.
    pub field_bits: u32,
    /// Payload length (symbols) of the synthetic block in symbol-level runs.
    /// Rank does not depend on it; it only makes the decode check non-trivial.
    pub payload_symbols: usize,
}

impl SimulationConfig {
    pub fn new(trials: u64, seed: u64, mode: SimulationMode) -> Result<Self> {
        if trials == 0 {
            return Err(invalid("trials", "must be >= 1"));
        }
        Ok(Self {
            trials,
            seed,
            mode,
            field_bits: 10,
            payload_symbols: 8,
        })
    }

    pub fn with_field_bits(mut self, bits: u32) -> Self {
        self.field_bits = bits;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub mean_energy: f64,
    pub mean_time: f64,
    /// Sample standard deviations.
    pub std_energy: f64,
    pub std_time: f64,
    /// 95% confidence half-widths, `1.96·std/√trials`.
    pub ci95_energy: f64,
    pub ci95_time: f64,
    pub trials_used: u64,
    pub mean_packets: f64,
    pub mean_rounds: f64,
    /// Symbol-level only: packets that arrived while the block was
    /// incomplete but added no rank.
    pub non_innovative: u64,
    /// Symbol-level only: trials whose decoded block differed from the source.
    pub decode_failures: u64,
}

impl SimulationResult {
    pub fn std_error_energy(&self) -> f64 {
        self.std_energy / (self.trials_used as f64).sqrt()
    }

    pub fn std_error_time(&self) -> f64 {
        self.std_time / (self.trials_used as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Trial {
    packets: u64,
    rounds: u64,
    non_innovative: u64,
    decode_failed: bool,
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Delivered packets out of a burst, one Bernoulli draw per packet.
fn delivered<R: Rng>(rng: &mut R, burst: u64, pe: f64) -> u64 {
    (0..burst).filter(|_| rng.random::<f64>() >= pe).count() as u64
}

fn run_counting(
    policy: &Policy,
    link: &LinkParameters,
    mode: SimulationMode,
    rng: &mut ChaCha8Rng,
) -> Trial {
    let (pe, pa) = (link.pkt_erasure(), link.ack_erasure());
    let mut t = Trial::default();
    // sender's view and receiver's actual missing dofs
    let mut believed = policy.len();
    let mut actual = believed;
    while believed > 0 {
        let burst = policy.packets(believed);
        t.packets += burst;
        t.rounds += 1;
        let got = delivered(rng, burst, pe) as usize;
        let ack_lost = rng.random::<f64>() < pa;
        match mode {
            SimulationMode::ModelFaithful => {
                if !ack_lost {
                    believed = believed.saturating_sub(got);
                }
            }
            _ => {
                actual = actual.saturating_sub(got);
                if !ack_lost {
                    believed = actual;
                }
            }
        }
    }
    t
}

fn run_coded(
    policy: &Policy,
    link: &LinkParameters,
    field: &Field,
    payload_symbols: usize,
    rng: &mut ChaCha8Rng,
) -> Trial {
    let (pe, pa) = (link.pkt_erasure(), link.ack_erasure());
    let block = policy.len();
    let sources = random_block(block, payload_symbols, field, rng);
    let mut decoder = Decoder::new(field, block, payload_symbols);
    let mut t = Trial::default();
    let mut believed = block;
    while believed > 0 {
        let burst = policy.packets(believed);
        t.packets += burst;
        t.rounds += 1;
        for _ in 0..burst {
            let packet = encode(&sources, field, rng).expect("block is well formed");
            if rng.random::<f64>() >= pe && !decoder.is_complete() {
                let innovative = decoder.receive(&packet).expect("dimensions match");
                if !innovative {
                    t.non_innovative += 1;
                }
            }
        }
        if rng.random::<f64>() >= pa {
            believed = decoder.missing();
        }
    }
    t.decode_failed = decoder.decode().as_ref() != Some(&sources);
    t
}

/// Exact integer moments of the per-trial (packets, rounds) counts.
///
/// Energy and time are both linear in the two counts, so their means and
/// variances follow from these sums without any floating-point reduction.
#[derive(Debug, Default)]
struct Moments {
    n: i128,
    p: i128,
    r: i128,
    pp: i128,
    pr: i128,
    rr: i128,
}

impl Moments {
    fn new(trials: &[Trial]) -> Self {
        let mut m = Moments::default();
        for t in trials {
            let (p, r) = (i128::from(t.packets), i128::from(t.rounds));
            m.n += 1;
            m.p += p;
            m.r += r;
            m.pp += p * p;
            m.pr += p * r;
            m.rr += r * r;
        }
        m
    }

    /// Mean and sample standard deviation of `a·packets + b·rounds`.
    fn linear(&self, a: f64, b: f64) -> (f64, f64) {
        let n = self.n as f64;
        let mean = (a * self.p as f64 + b * self.r as f64) / n;
        if self.n < 2 {
            return (mean, 0.0);
        }
        // n·Σxy - Σx·Σy, exact
        let spp = self.n * self.pp - self.p * self.p;
        let spr = self.n * self.pr - self.p * self.r;
        let srr = self.n * self.rr - self.r * self.r;
        let num = a * a * spp as f64 + 2.0 * a * b * spr as f64 + b * b * srr as f64;
        let var = (num / (n * (n - 1.0))).max(0.0);
        (mean, var.sqrt())
    }
}

/// Runs `config.trials` independent trials with the default execution
/// strategy.
pub fn run_trials(
    policy: &Policy,
    link: &LinkParameters,
    coding: &CodingParameters,
    config: &SimulationConfig,
) -> Result<SimulationResult> {
    run_trials_with(policy, link, coding, config, Execution::default())
}

/// [`run_trials`] with an explicit execution strategy. The result does not
/// depend on the strategy.
pub fn run_trials_with(
    policy: &Policy,
    link: &LinkParameters,
    coding: &CodingParameters,
    config: &SimulationConfig,
    exec: Execution,
) -> Result<SimulationResult> {
    if config.trials == 0 {
        return Err(invalid("trials", "must be >= 1"));
    }
    policy.check_block(coding)?;
    for i in 1..=policy.len() {
        if policy.packets(i) < i as u64 {
            return Err(Error::PolicyInfeasible {
                state: i,
                packets: policy.packets(i),
            });
        }
    }
    let field = match config.mode {
        SimulationMode::SymbolLevel => Some(Field::new(config.field_bits)?),
        _ => None,
    };

    let count = usize::try_from(config.trials).map_err(|_| invalid("trials", "too large"))?;
    let trials: Vec<Trial> = exec.map_range(count, |k| {
        let mut rng = trial_rng(config.seed, k as u64);
        match &field {
            Some(f) => run_coded(policy, link, f, config.payload_symbols, &mut rng),
            None => run_counting(policy, link, config.mode, &mut rng),
        }
    });

    let timing = DerivedTiming::new(link, coding);
    let moments = Moments::new(&trials);
    let (mean_energy, std_energy) = moments.linear(timing.packet_energy, timing.ack_energy);
    let (mean_time, std_time) = moments.linear(timing.packet_time, timing.wait_time);
    let root = (config.trials as f64).sqrt();
    let n = config.trials as f64;
    Ok(SimulationResult {
        mean_energy,
        mean_time,
        std_energy,
        std_time,
        ci95_energy: 1.96 * std_energy / root,
        ci95_time: 1.96 * std_time / root,
        trials_used: config.trials,
        mean_packets: moments.p as f64 / n,
        mean_rounds: moments.r as f64 / n,
        non_innovative: trials.iter().map(|t| t.non_innovative).sum(),
        decode_failures: trials.iter().filter(|t| t.decode_failed).count() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig4(pe: f64, pa: f64) -> (LinkParameters, CodingParameters) {
        (
            LinkParameters::new(1.5e6, 0.125, 1.0, pe, pa).unwrap(),
            CodingParameters::new(10, 10_000, 80, 20, 100).unwrap(),
        )
    }

    #[test]
    fn error_free_runs_are_deterministic_in_cost() {
        let (link, coding) = fig4(0.0, 0.0);
        let t = DerivedTiming::new(&link, &coding);
        for mode in [
            SimulationMode::ModelFaithful,
            SimulationMode::PersistentDof,
            SimulationMode::SymbolLevel,
        ] {
            let cfg = SimulationConfig::new(200, 9, mode).unwrap();
            let r = run_trials(&Policy::minimal(10), &link, &coding, &cfg).unwrap();
            if mode != SimulationMode::SymbolLevel {
                assert_eq!(r.std_energy, 0.0);
                assert_eq!(r.std_time, 0.0);
                assert_eq!(r.ci95_energy, 0.0);
                assert!((r.mean_energy - (10.0 * t.packet_energy + t.ack_energy)).abs() < 1e-15);
                assert!((r.mean_time - (10.0 * t.packet_time + t.wait_time)).abs() < 1e-14);
            }
            assert_eq!(r.decode_failures, 0);
        }
    }

    #[test]
    fn same_seed_same_result() {
        let (link, coding) = fig4(0.4, 0.1);
        let policy = Policy::new((1..=10).map(|i| i + 4).collect()).unwrap();
        let cfg = SimulationConfig::new(500, 42, SimulationMode::PersistentDof).unwrap();
        let a = run_trials(&policy, &link, &coding, &cfg).unwrap();
        let b = run_trials(&policy, &link, &coding, &cfg).unwrap();
        let c = run_trials_with(&policy, &link, &coding, &cfg, Execution::Sequential).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let other = SimulationConfig::new(500, 43, SimulationMode::PersistentDof).unwrap();
        assert_ne!(a, run_trials(&policy, &link, &coding, &other).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        let (link, coding) = fig4(0.4, 0.1);
        assert!(SimulationConfig::new(0, 1, SimulationMode::ModelFaithful).is_err());
        let cfg = SimulationConfig::new(10, 1, SimulationMode::ModelFaithful).unwrap();
        assert!(run_trials(&Policy::minimal(3), &link, &coding, &cfg).is_err());
        assert!("fast".parse::<SimulationMode>().is_err());
        assert_eq!(
            "symbol-level".parse::<SimulationMode>().unwrap(),
            SimulationMode::SymbolLevel
        );
    }
}
