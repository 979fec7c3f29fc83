//! Command failures and their exit codes.

use std::fmt;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn other(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_OTHER,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub fn exit_code(e: &dioph::Error) -> i32 {
    use dioph::Error::*;
    match e {
        Infeasible(_) | HypothesisViolation(_) => EXIT_INFEASIBLE,
        PrecisionExhausted { .. } | ExpansionExhausted { .. } => EXIT_PRECISION,
        _ => EXIT_OTHER,
    }
}

impl From<dioph::Error> for CliError {
    fn from(e: dioph::Error) -> Self {
        CliError {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::other(format!("json: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::other(format!("csv: {e}"))
    }
}
