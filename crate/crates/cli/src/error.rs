use qega::samplers::SamplerError;
use qega::GaError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Ga(GaError),
    #[error("no rows in {0}")]
    NoRows(String),
}

impl From<GaError> for CliError {
    fn from(e: GaError) -> Self {
        match e {
            GaError::Sampler(s) => CliError::Sampler(s),
            GaError::InvalidConfig(m) => CliError::Config(m),
            other => CliError::Ga(other),
        }
    }
}

impl CliError {
    /// 1 for configuration and input problems, 2 for sampler or protocol failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Sampler(_) => 2,
            _ => 1,
        }
    }
}
