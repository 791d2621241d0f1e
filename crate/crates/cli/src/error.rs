use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] fanomode::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 for bad input or unsupported regimes, 3 for solver failures.
    pub fn exit_code(&self) -> i32 {
        use fanomode::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Core(E::Parameter { .. } | E::Domain(_) | E::Unsupported(_) | E::DensityMatrix(_)) => 1,
            CliError::Core(_) => 3,
        }
    }
}
