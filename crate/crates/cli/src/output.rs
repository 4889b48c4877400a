// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::Serialize;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fields shared by every JSON document.
#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub tool_version: &'static str,
    pub seed: u64,
    pub group: Option<String>,
    pub level: Option<usize>,
    #[serde(flatten)]
    pub payload: T,
}

/// What a command produced: text for humans and a JSON payload.
pub struct Output {
    pub group: Option<String>,
    pub level: Option<usize>,
    pub text: String,
    pub json: serde_json::Value,
    /// Set by `verify` and `decompose --oracle` when a check failed.
    pub failed: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Computation(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Computation(_) => 2,
            CliError::Verification(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Computation(_) => "computation",
            CliError::Verification(_) => "verification",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Computation(m) | CliError::Verification(m) => m,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "message": self.message(),
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl From<branch_hecke::Error> for CliError {
    fn from(e: branch_hecke::Error) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Computation(e.to_string())
        }
    }
}
