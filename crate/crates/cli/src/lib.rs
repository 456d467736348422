//! IO, file formats, experiment running, and the command line for the
//! differentially private boosting core.

pub mod audit;
pub mod cli;
pub mod data;
pub mod eval;
pub mod model;
pub mod synth;

use thiserror::Error;

/// Errors from loading, validating, encoding, or training on data.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("{0}: parse error: {1}")]
    Parse(String, String),
    #[error("{0}: no data rows")]
    Empty(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("encoding error: {0}")]
    Encode(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("training error: {0}")]
    Train(String),
}
