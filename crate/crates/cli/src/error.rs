use fluidstar_core::Error as CoreError;
use thiserror::Error;

/// Failed checks are not errors: they produce a report and exit 2 through
/// [`crate::output::Outcome`].
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Integration(CoreError),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Integration(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::BadParams(m) | CoreError::Parse(m) => CliError::Usage(m),
            CoreError::UnknownModel(id) => CliError::Usage(format!("unknown model '{id}'")),
            CoreError::Io(m) => CliError::Io(m),
            other => CliError::Integration(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
