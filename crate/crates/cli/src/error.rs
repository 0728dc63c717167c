use blinkforge::error::Error as CoreError;
use thiserror::Error;

/// Failures of one command-line run, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: u64, msg: String },

    #[error("{path}: {msg}")]
    Data { path: String, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    /// 2 for usage, 3 for data validation, 4 for internal breaches.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(CoreError::InvalidArgument(_) | CoreError::TooManyFeatures(_)) => 2,
            CliError::Internal(_) => 4,
            _ => 3,
        }
    }

    pub fn parse(path: &str, line: u64, msg: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.to_string(),
            line,
            msg: msg.into(),
        }
    }

    pub fn data(path: &str, msg: impl Into<String>) -> Self {
        CliError::Data {
            path: path.to_string(),
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
