use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] zerotemp::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 capacity, 3 constraint violation, 4 bad input, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(zerotemp::Error::Capacity { .. }) => 2,
            CliError::Core(zerotemp::Error::Constraint(_)) => 3,
            CliError::Core(zerotemp::Error::InvalidInput(_) | zerotemp::Error::Undefined(_)) => 4,
            CliError::Usage(_) => 4,
            CliError::Json(e) if e.is_data() || e.is_syntax() => 4,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
