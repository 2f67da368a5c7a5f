use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] fracterm_core::Error),
}

impl CliError {
    /// Machine-readable code, also written to report.csv.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "ConfigError",
            CliError::Io { .. } => "IoError",
            CliError::Core(e) => e.code(),
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Io { .. } => 3,
            CliError::Core(e) => match e {
                fracterm_core::Error::Domain(_) => 10,
                fracterm_core::Error::Accuracy { .. } => 11,
                fracterm_core::Error::TerminalTimeInadmissible { .. } => 12,
                fracterm_core::Error::Alias { .. } => 13,
                fracterm_core::Error::Grid(_) => 14,
                fracterm_core::Error::NonConvergence { .. } => 15,
                fracterm_core::Error::DegenerateWindow(_) => 16,
                fracterm_core::Error::Input(_) => 17,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
