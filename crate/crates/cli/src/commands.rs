//! The three subcommands. Each returns its output as a string so callers and
//! tests decide where it goes.

use std::path::Path;

use rlnc_tdd::{
    evaluate, full_duplex_energy, full_duplex_time, run_trials, Execution, Objective, Policy,
    SimulationConfig,
};

use crate::config::{Point, Scenario};
use crate::error::{CliError, Result};
use crate::table::{optimal_policy, params_hash, PolicyTable};

pub const EVALUATE_HEADER: [&str; 8] = [
    "scheme",
    "Pe",
    "Pe_ack",
    "M",
    "n",
    "E_M_joules",
    "T_M_seconds",
    "energy_per_bit",
];

pub const SIMULATE_HEADER: [&str; 10] = [
    "mode",
    "trials",
    "seed",
    "mean_E",
    "ci95_E",
    "mean_T",
    "ci95_T",
    "analytic_E",
    "analytic_T",
    "within_3se",
];

fn sci(x: f64) -> String {
    format!("{x:e}")
}

fn finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("{what} is not finite")))
    }
}

/// Output of `optimize`: the tables and one summary line per table.
#[derive(Debug, Clone)]
pub struct Optimized {
    pub tables: Vec<PolicyTable>,
    pub objectives: Vec<f64>,
}

impl Optimized {
    /// A single table as an object, several as an array.
    pub fn to_json(&self) -> String {
        let mut text = match self.tables.as_slice() {
            [one] => serde_json::to_string_pretty(one),
            many => serde_json::to_string_pretty(many),
        }
        .expect("plain data");
        text.push('\n');
        text
    }

    pub fn summary(&self) -> String {
        self.tables
            .iter()
            .zip(&self.objectives)
            .map(|(t, v)| {
                format!(
                    "{} objective {} for M={} N={:?}\n",
                    t.objective,
                    sci(*v),
                    t.block_size,
                    t.packets
                )
            })
            .collect()
    }
}

pub fn optimize(scenario: &Scenario, cache: Option<&Path>) -> Result<Optimized> {
    let points = scenario.points()?;
    let objectives = scenario.objective.objectives();
    let per_point = Execution::default().map_slice(&points, |p| {
        objectives
            .iter()
            .map(|&objective| {
                let table = optimal_policy(&p.link, &p.coding, objective, cache)?;
                let policy = table.policy_for(p.coding.block_size())?;
                let report = evaluate(&policy, &p.link, &p.coding)?;
                let value = match objective {
                    Objective::Energy => report.total_energy,
                    Objective::Time => report.total_time,
                };
                finite(&[value], "optimal objective")?;
                Ok((table, value))
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut out = Optimized {
        tables: Vec::new(),
        objectives: Vec::new(),
    };
    for rows in per_point {
        for (table, value) in rows? {
            out.tables.push(table);
            out.objectives.push(value);
        }
    }
    Ok(out)
}

/// Policy used for `objective` at `point`: the supplied table if it was
/// built for that objective, the cached or freshly optimized one otherwise.
fn policy_at(
    point: &Point,
    objective: Objective,
    supplied: Option<&PolicyTable>,
    cache: Option<&Path>,
) -> Result<Policy> {
    let block = point.coding.block_size();
    match supplied {
        Some(t) if t.objective == objective => t.policy_for(block),
        _ => optimal_policy(&point.link, &point.coding, objective, cache)?.policy_for(block),
    }
}

/// Checks a supplied table against the scenario and warns when it was built
/// for other parameters.
fn check_supplied(scenario: &Scenario, table: Option<&PolicyTable>) -> Result<()> {
    let Some(table) = table else { return Ok(()) };
    table.policy_for(scenario.block_size())?;
    let points = scenario.points()?;
    if !points
        .iter()
        .any(|p| params_hash(&p.link, &p.coding) == table.params_hash)
    {
        eprintln!("warning: policy table was computed for different parameters");
    }
    Ok(())
}

pub fn evaluate_csv(
    scenario: &Scenario,
    supplied: Option<&PolicyTable>,
    cache: Option<&Path>,
) -> Result<String> {
    check_supplied(scenario, supplied)?;
    let points = scenario.points()?;
    let rows = Execution::default().map_slice(&points, |p| -> Result<Vec<[String; 8]>> {
        let m = p.coding.block_size();
        let row = |scheme: &str, e: f64, t: f64| -> Result<[String; 8]> {
            let epb = rlnc_tdd::energy_per_bit(e, &p.coding);
            finite(&[e, t, epb], scheme)?;
            Ok([
                scheme.to_string(),
                sci(p.link.pkt_erasure()),
                sci(p.link.ack_erasure()),
                m.to_string(),
                p.coding.payload_bits().to_string(),
                sci(e),
                sci(t),
                sci(epb),
            ])
        };
        let mut out = Vec::with_capacity(3);
        for (scheme, objective) in [("TDD-E", Objective::Energy), ("TDD-T", Objective::Time)] {
            let policy = policy_at(p, objective, supplied, cache)?;
            let r = evaluate(&policy, &p.link, &p.coding)?;
            out.push(row(scheme, r.total_energy, r.total_time)?);
        }
        out.push(row(
            "FD",
            full_duplex_energy(&p.link, &p.coding),
            full_duplex_time(&p.link, &p.coding),
        )?);
        Ok(out)
    });

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(EVALUATE_HEADER)?;
    for point_rows in rows {
        for r in point_rows? {
            w.write_record(&r)?;
        }
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Output(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of ascii fields"))
}

/// Monte Carlo means are compared with the analytic values at three standard
/// errors, plus a few ulps so an error-free run (zero spread) still matches.
fn within_3se(mean: f64, se: f64, analytic: f64) -> bool {
    (mean - analytic).abs() <= 3.0 * se + 1e-12 * analytic.abs()
}

pub fn simulate_csv(
    scenario: &Scenario,
    config: &SimulationConfig,
    supplied: Option<&PolicyTable>,
    cache: Option<&Path>,
) -> Result<String> {
    check_supplied(scenario, supplied)?;
    let objectives = match supplied {
        Some(t) => vec![t.objective],
        None => scenario.objective.objectives(),
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SIMULATE_HEADER)?;
    // trials already run in parallel, so points go one after another
    for p in scenario.points()? {
        for &objective in &objectives {
            let policy = policy_at(&p, objective, supplied, cache)?;
            let analytic = evaluate(&policy, &p.link, &p.coding)?;
            let r = run_trials(&policy, &p.link, &p.coding, config)?;
            finite(&[r.mean_energy, r.mean_time], "simulated mean")?;
            let ok = within_3se(r.mean_energy, r.std_error_energy(), analytic.total_energy)
                && within_3se(r.mean_time, r.std_error_time(), analytic.total_time);
            w.write_record([
                config.mode.to_string(),
                config.trials.to_string(),
                config.seed.to_string(),
                sci(r.mean_energy),
                sci(r.ci95_energy),
                sci(r.mean_time),
                sci(r.ci95_time),
                sci(analytic.total_energy),
                sci(analytic.total_time),
                ok.to_string(),
            ])?;
        }
    }
    finish(w)
}
