//! Command-line error type and the stable exit-code mapping.

use kproj_core::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Malformed input file or parameters.
    Parse(String),
    /// Mathematical failure surfaced by the core library.
    Core(CoreError),
    /// The requested trace mode has no metadata to work from.
    ModeUnavailable(&'static str),
    /// Cross-check between independent computation modes failed.
    CheckFailed(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn parse(message: String) -> Self {
        CliError::Parse(message)
    }

    /// Exit codes: 0 ok, 2 axiom or math failure, 3 parse error,
    /// 4 limit exceeded, 5 missing metadata.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 3,
            CliError::ModeUnavailable(_) => 5,
            CliError::CheckFailed(_) => 2,
            CliError::Core(e) => match e {
                CoreError::LimitExceeded { .. } | CoreError::DimensionOverflow { .. } => 4,
                CoreError::MissingMetadata(_) => 5,
                _ => 2,
            },
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::ModeUnavailable(what) => {
                write!(f, "mode unavailable: document lacks {what}")
            }
            CliError::CheckFailed(m) => write!(f, "cross-check failed: {m}"),
        }
    }
}
