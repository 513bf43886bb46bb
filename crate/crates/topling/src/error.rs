use std::path::PathBuf;

use thiserror::Error;

/// Failure of one command-line run, grouped by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error(transparent)]
    Core(#[from] topling_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for configuration problems, 4 when a resource guard trips, 3 for
    /// everything concerning the data.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(topling_core::Error::ResourceLimit { .. }) => 4,
            _ => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "config",
            4 => "resource",
            _ => "data",
        }
    }

    /// One-line JSON object describing the error.
    pub fn to_line(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "code": self.exit_code(),
            "message": self.to_string().replace('\n', " "),
        })
        .to_string()
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
