use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: row {row}, column {column}: {message}")]
    Parse {
        path: String,
        row: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: row {row} has {got} coordinates, expected {expected}")]
    DimensionMismatch {
        path: String,
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Geometry(#[from] sparsegeom::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::DimensionMismatch { .. } => "dimension-mismatch",
            CliError::Config(_) => "config",
            CliError::Geometry(sparsegeom::Error::InstanceTooLarge { .. }) => "budget-exceeded",
            CliError::Geometry(_) => "geometry",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
        }
    }
}
