// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::process::ExitCode;

/// Error carrying the process exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_METRIC: u8 = 4;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }

    /// Reclassify configuration errors as input incompatibility.
    pub fn into_input_error(self) -> Self {
        if self.code == EXIT_USAGE {
            Self {
                code: EXIT_IO,
                ..self
            }
        } else {
            self
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<pulsar_core::Error> for CliError {
    fn from(e: pulsar_core::Error) -> Self {
        use pulsar_core::Error as E;
        let code = match &e {
            E::InvalidArgument(_) => EXIT_USAGE,
            E::Format { .. } | E::Io(_) | E::Json(_) => EXIT_IO,
            E::UndefinedMetric(_) => EXIT_METRIC,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attach a path to IO and format errors.
pub trait Context<T> {
    fn with_path(self, path: &std::path::Path) -> CliResult<T>;
}

impl<T, E: Into<CliError>> Context<T> for Result<T, E> {
    fn with_path(self, path: &std::path::Path) -> CliResult<T> {
        self.map_err(|e| {
            let e = e.into();
            CliError {
                message: format!("{}: {}", path.display(), e.message),
                ..e
            }
        })
    }
}
