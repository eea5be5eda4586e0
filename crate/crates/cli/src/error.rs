use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] ddfrot::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0} oracle check(s) failed")]
    OracleFailed(usize),
}

impl CliError {
    /// 1 for oracle or validation failures, 2 for usage and configuration.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Core(_) => 2,
            CliError::Io(_) | CliError::OracleFailed(_) => 1,
        }
    }
}
