use thiserror::Error;

use crate::render::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] spectra_core::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("one or more suites failed")]
    SuiteFailed(Box<Report>),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    /// 1 for domain and verification failures, 2 for exhausted budgets, 3 for usage errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(spectra_core::Error::BudgetExceeded(_)) => 2,
            CliError::Core(
                spectra_core::Error::Parse(_) | spectra_core::Error::InvalidDigit(_),
            )
            | CliError::Usage(_) => 3,
            _ => 1,
        }
    }
}

impl std::fmt::Debug for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Report").field("json", &self.json).finish()
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
