use std::fmt;

use affinor_core::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Missing or malformed flags and configuration.
    Config(String),
    Core(CoreError),
    Io(String),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Io(_) => EXIT_CONFIG,
            Self::Core(e) => match e {
                CoreError::OrderingViolation { .. }
                | CoreError::NonFinite(_)
                | CoreError::InvalidParams { .. }
                | CoreError::OutOfDomain { .. }
                | CoreError::UnknownFamily(_)
                | CoreError::MissingConformalFields
                | CoreError::UnknownCriterion(_)
                | CoreError::CosineOutOfRange { .. } => EXIT_CONFIG,
                CoreError::NotPositiveDefinite { .. }
                | CoreError::EigenvectorInput { .. }
                | CoreError::ZeroVector
                | CoreError::BoundaryFixedPoint
                | CoreError::SingularMetric { .. } => EXIT_GUARD,
                CoreError::ScaleOverflow { .. } => EXIT_NUMERIC,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(m) => write!(f, "configuration error: {m}"),
            Self::Core(e) => write!(f, "{e}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        Self::Core(e)
    }
}
