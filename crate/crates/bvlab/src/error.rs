use thiserror::Error;

/// Errors surfaced by the command-line driver.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Clap(Box<clap::Error>),
    #[error(transparent)]
    Core(#[from] bvlab_core::Error),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn format(line: usize, msg: impl Into<String>) -> Self {
        CliError::Format { line, msg: msg.into() }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 0 for help and version output, 64 for usage errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use clap::error::ErrorKind;
        match self {
            CliError::Clap(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => 0,
            CliError::Clap(_) | CliError::Usage(_) => 64,
            _ => 1,
        }
    }
}
