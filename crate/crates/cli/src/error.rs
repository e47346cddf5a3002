use thiserror::Error;

/// Everything a run can fail with, mapped onto process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("size guard: {0}")]
    Resource(String),
    #[error(transparent)]
    Core(#[from] ladder_qca::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for configuration errors, 3 for size guards, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use ladder_qca::Error as E;
        match self {
            CliError::Config(_) | CliError::Core(E::InvalidInput(_) | E::DimensionMismatch(_)) => 2,
            CliError::Resource(_) | CliError::Core(E::ResourceGuard(_)) => 3,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
