use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("geometry inconsistency: {0}")]
    Geometry(String),
    #[error(transparent)]
    Compute(#[from] dpe_multipath::Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } | CliError::Parse(_) => 2,
            CliError::Schema { .. } => 3,
            CliError::Geometry(_) => 4,
            CliError::Compute(_) | CliError::Output(_) => 70,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
