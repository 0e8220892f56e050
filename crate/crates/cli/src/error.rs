use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the command-line tool, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// The scenario is missing a field or holds a value out of range.
    #[error("invalid config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("cannot read config {path}: {source}")]
    ConfigRead {
        path: PathBuf,
        source: std::io::Error,
    },

    /// A supplied policy table does not fit the scenario.
    #[error("policy mismatch: {0}")]
    Policy(String),

    /// The numerical layer could not produce a finite answer.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::ConfigRead { .. } => 2,
            CliError::Policy(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Output(_) => 1,
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Library error raised while building parameters of `section`.
    pub(crate) fn from_params(section: &str, err: rlnc_tdd::Error) -> Self {
        match err {
            rlnc_tdd::Error::InvalidParameter { field, reason } => {
                CliError::config(format!("{section}.{field}"), reason)
            }
            other => CliError::from(other),
        }
    }
}

impl From<rlnc_tdd::Error> for CliError {
    fn from(err: rlnc_tdd::Error) -> Self {
        use rlnc_tdd::Error as E;
        match err {
            E::PolicyLength { .. } | E::PolicyInfeasible { .. } => {
                CliError::Policy(err.to_string())
            }
            E::InvalidParameter { field, reason } => CliError::config(field, reason),
            E::Domain(_) | E::UnboundedSearch { .. } | E::Shape(_) => {
                CliError::Numerical(err.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Output(err.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Output(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
