use thiserror::Error;

use crate::ket::ParseError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("site {site} out of range for a {sites}-site state")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("outcome {outcome} out of range for site {site} of dimension {dim}")]
    OutcomeOutOfRange { site: usize, outcome: usize, dim: usize },

    #[error("level {level} out of range (expected 2..={sites})")]
    LevelOutOfRange { level: usize, sites: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("state file: {0}")]
    StateFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
