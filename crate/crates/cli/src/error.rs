use std::fmt;
use std::path::Path;

use minimd::analysis::AnalysisError;
use minimd::engine::EngineError;
use minimd::formats::FormatError;
use minimd::prep::PrepError;
use minimd::system::SystemError;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    /// Bad flags, invalid input or failed validation.
    Usage = 1,
    /// Files that cannot be read or written, damaged binary files.
    Io = 2,
    /// Blow-up, singularity or non-finite values during a run.
    Numerical = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub status: ExitStatus,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { status: ExitStatus::Usage, message: message.into() }
    }

    /// Prefixes the message with `path`.
    pub fn at(self, path: &Path) -> Self {
        CliError { message: format!("{}: {}", path.display(), self.message), ..self }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        let status = match e {
            FormatError::Io(_)
            | FormatError::BadMagic { .. }
            | FormatError::Version { .. }
            | FormatError::Truncated(_)
            | FormatError::Corrupt(_) => ExitStatus::Io,
            _ => ExitStatus::Usage,
        };
        CliError { status, message: e.to_string() }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Output(inner) => inner.into(),
            EngineError::Singularity { .. } | EngineError::NonFinite { .. } | EngineError::BlowUp { .. } => {
                CliError { status: ExitStatus::Numerical, message: e.to_string() }
            }
            _ => CliError::usage(e.to_string()),
        }
    }
}

impl From<PrepError> for CliError {
    fn from(e: PrepError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<SystemError> for CliError {
    fn from(e: SystemError) -> Self {
        CliError::usage(e.to_string())
    }
}
