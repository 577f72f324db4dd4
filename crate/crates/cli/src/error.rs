// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use lattice_optics::Error;
use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or parameter values.
    Config(String),
    /// A computation failed to converge, bracket or fit.
    Numerical { context: String, source: Error },
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical { .. } => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical { .. } => "numerical",
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self, experiment: Option<&str>) -> String {
        json!({
            "error": {
                "kind": self.kind(),
                "experiment": experiment,
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Io(m) => write!(f, "{m}"),
            CliError::Numerical { context, source } if context.is_empty() => write!(f, "{source}"),
            CliError::Numerical { context, source } => write!(f, "{context}: {source}"),
        }
    }
}

fn classify(e: Error, context: String) -> CliError {
    match e {
        Error::InvalidArgument(_)
        | Error::Config(_)
        | Error::InvalidChain(_)
        | Error::ParityMismatch { .. }
        | Error::NonPositiveCoupling { .. }
        | Error::SectorTooLarge { .. } => {
            if context.is_empty() {
                CliError::Config(e.to_string())
            } else {
                CliError::Config(format!("{context}: {e}"))
            }
        }
        source => CliError::Numerical { context, source },
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        classify(e, String::new())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Attach context to a core error without changing its class.
pub trait Context<T> {
    fn context(self, what: impl Into<String>) -> Result<T, CliError>;
}

impl<T> Context<T> for Result<T, Error> {
    fn context(self, what: impl Into<String>) -> Result<T, CliError> {
        self.map_err(|e| classify(e, what.into()))
    }
}
