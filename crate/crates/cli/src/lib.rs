//! Command-line front end for `diffh2`: spectrum, design, verify and simulate
//! commands driven by one problem config, with JSON reports and CSV
//! trajectories.

pub mod commands;
pub mod config;
pub mod report;

use std::fmt;

use diffh2::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Input = 1,
    Disconnected = 2,
    /// γ infeasible, gain not synchronizing, or no stabilizing design.
    Infeasible = 3,
    NotStandardForm = 4,
    OracleDisagreement = 5,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

impl From<&Error> for Exit {
    fn from(err: &Error) -> Self {
        match err {
            Error::Disconnected => Exit::Disconnected,
            Error::NotStandardForm(_) => Exit::NotStandardForm,
            Error::GammaInfeasible { .. }
            | Error::NotSynchronizing { .. }
            | Error::RiccatiFailure(_)
            | Error::NotStabilizable
            | Error::NotStable => Exit::Infeasible,
            _ => Exit::Input,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            exit: Exit::Input,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError {
            exit: Exit::from(&err),
            message: err.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}
