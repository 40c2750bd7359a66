use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] landscape_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 when the analysis itself fails, 2 for unusable input.
    pub fn exit_code(&self) -> u8 {
        use landscape_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_analysis() => 1,
            CliError::Core(
                E::InvalidRange { .. } | E::InvalidSpec(_) | E::BadTarget { .. } | E::TooLarge(_) | E::Parse { .. },
            ) => 2,
            _ => 1,
        }
    }
}
