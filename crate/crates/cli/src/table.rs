//! Policy look-up tables and their on-disk cache.

use std::path::{Path, PathBuf};

use rlnc_tdd::{optimize, CodingParameters, LinkParameters, Objective, Policy};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "RLNC_TDD_CACHE";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyTable {
    #[serde(rename = "M")]
    pub block_size: usize,
    #[serde(rename = "N")]
    pub packets: Vec<u64>,
    pub objective: Objective,
    pub params_hash: String,
}

/// SHA-256 over every parameter that can change an optimal policy.
///
/// Floats are written with `{:e}`, which round-trips exactly, so equal
/// parameter sets always hash equally.
pub fn params_hash(link: &LinkParameters, coding: &CodingParameters) -> String {
    let canonical = format!(
        "data_rate={:e};propagation_delay={:e};transmit_power={:e};pkt_erasure={:e};\
         ack_erasure={:e};block_size={};payload_bits={};header_bits={};coeff_bits={};ack_bits={}",
        link.data_rate(),
        link.propagation_delay(),
        link.transmit_power(),
        link.pkt_erasure(),
        link.ack_erasure(),
        coding.block_size(),
        coding.payload_bits(),
        coding.header_bits(),
        coding.coeff_bits(),
        coding.ack_bits(),
    );
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

impl PolicyTable {
    pub fn new(policy: &Policy, objective: Objective, params_hash: String) -> Self {
        Self {
            block_size: policy.len(),
            packets: policy.as_slice().to_vec(),
            objective,
            params_hash,
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Policy(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Policy(format!("{} is not a policy table: {e}", path.display())))
    }

    /// The policy, checked against its own `M` and the scenario's block size.
    pub fn policy_for(&self, block_size: usize) -> Result<Policy> {
        if self.packets.len() != self.block_size {
            return Err(CliError::Policy(format!(
                "table declares M = {} but lists {} burst lengths",
                self.block_size,
                self.packets.len()
            )));
        }
        if self.block_size != block_size {
            return Err(CliError::Policy(format!(
                "table is for M = {}, scenario has M = {block_size}",
                self.block_size
            )));
        }
        Policy::new(self.packets.clone()).map_err(|e| CliError::Policy(e.to_string()))
    }
}

fn cache_path(dir: &Path, hash: &str, objective: Objective) -> PathBuf {
    dir.join(format!("{hash}-{objective}.json"))
}

/// Optimal policy for one parameter set, read from the cache directory when
/// present and valid, computed and stored otherwise.
pub fn optimal_policy(
    link: &LinkParameters,
    coding: &CodingParameters,
    objective: Objective,
    cache: Option<&Path>,
) -> Result<PolicyTable> {
    let hash = params_hash(link, coding);
    let path = cache.map(|dir| cache_path(dir, &hash, objective));
    if let Some(path) = &path {
        if let Ok(table) = PolicyTable::read(path) {
            if table.params_hash == hash
                && table.objective == objective
                && table.policy_for(coding.block_size()).is_ok()
            {
                return Ok(table);
            }
        }
    }
    let result = optimize(link, coding, objective)?;
    let table = PolicyTable::new(&result.policy, objective, hash);
    if let Some(path) = &path {
        // a failed cache write only costs a recomputation next time
        let stored = path
            .parent()
            .map_or(Ok(()), std::fs::create_dir_all)
            .and_then(|()| {
                std::fs::write(path, serde_json::to_string(&table).expect("plain data"))
            });
        if let Err(e) = stored {
            eprintln!("warning: cannot write policy cache {}: {e}", path.display());
        }
    }
    Ok(table)
}

/// Cache directory from the environment, if set and non-empty.
pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}
