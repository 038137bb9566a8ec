use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("initial densities sum to {0}, which exceeds 1")]
    DensityOverflow(f64),

    #[error("tick arithmetic overflow: {0}")]
    TickOverflow(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("scaffold is not successful: first failing box is layer {layer}, index {index}")]
    UnsuccessfulScaffold { layer: usize, index: usize },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("config error in {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
