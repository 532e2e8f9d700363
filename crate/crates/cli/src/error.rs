use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("plot {}: {reason}", path.display())]
    Plot { path: PathBuf, reason: String },

    #[error("fit did not converge after {iterations} iterations (report written to {})", report.display())]
    NotConverged { iterations: usize, report: PathBuf },

    #[error(transparent)]
    Engine(#[from] grapespin::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 config, 3 numeric, 4 I/O, 5 fit not converged.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } | CliError::Plot { .. } => 4,
            CliError::NotConverged { .. } => 5,
            CliError::Engine(e) if e.is_config() => 2,
            CliError::Engine(e) if e.is_io() => 4,
            CliError::Engine(grapespin::Error::NotConverged { .. }) => 5,
            CliError::Engine(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
