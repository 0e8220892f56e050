use thiserror::Error;

/// Errors produced by the analytical, optimization, coding and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter set violates a construction invariant.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// A policy sends fewer packets than the dofs its state requires.
    #[error("policy infeasible at state {state}: N = {packets} < {state}")]
    PolicyInfeasible { state: usize, packets: u64 },

    /// Policy length differs from the block size.
    #[error("policy covers {policy} states but block size is {block}")]
    PolicyLength { policy: usize, block: usize },

    /// The integer search kept finding its optimum on the window edge.
    #[error("unbounded search at state {state}: optimum still on the bound at N = {bound}")]
    UnboundedSearch { state: usize, bound: u64 },

    /// Vector dimensions do not match the decoder or encoder.
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
