//! Std front end for `unate-core`: file formats, JSON reports, run manifests,
//! parallel drivers and the acceptance suite behind `unate selftest`.
#![cfg_attr(
    feature = "arithmetic-audit",
    deny(clippy::float_arithmetic, clippy::float_cmp)
)]

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod formats;
pub mod manifest;
pub mod parallel;
pub mod report;
pub mod schema;

pub use unate_core;

/// Outcome of a command, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Budget,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Budget => 3,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 4,
            CliError::Budget(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

pub(crate) fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}
