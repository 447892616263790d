use std::fmt;

use serde::Serialize;

use crate::Format;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
}

impl Status {
    pub fn from_holds(holds: bool) -> Self {
        if holds {
            Status::Ok
        } else {
            Status::Violation
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
        }
    }
}

pub fn input(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

pub fn print_json(v: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("output serializes"));
}

/// Reject formats a subcommand has no use for.
pub fn only(format: Format, allowed: &[Format]) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "--format {} is not available here",
            format!("{format:?}").to_lowercase()
        )))
    }
}
