use std::io;
use std::path::PathBuf;

/// Exit status 2: bad invocation or configuration.
pub const EXIT_USAGE: i32 = 2;
/// Exit status 3: an input file or directory is missing.
pub const EXIT_MISSING: i32 = 3;
/// Exit status 4: the integration produced non-finite values.
pub const EXIT_BLOW_UP: i32 = 4;
/// Exit status 1: at least one asserted check failed.
pub const EXIT_CHECKS_FAILED: i32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("missing {0}")]
    Missing(PathBuf),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] nssp_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Missing(_) => EXIT_MISSING,
            CliError::Io { source, .. } if source.kind() == io::ErrorKind::NotFound => EXIT_MISSING,
            CliError::Core(nssp_core::Error::BlowUpSuspected { .. }) => EXIT_BLOW_UP,
            _ => EXIT_USAGE,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> CliError {
        let path = path.into();
        move |source| {
            if source.kind() == io::ErrorKind::NotFound {
                CliError::Missing(path)
            } else {
                CliError::Io { path, source }
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
