//! Experiment harness: test matrix generation, accuracy metrics, matrix
//! files and the command line front end.

pub mod accuracy;
pub mod cli;
pub mod generate;
pub mod io;
pub mod rng;

use std::path::Path;

use thiserror::Error;

use crate::error::LinalgError;

pub use crate::driver::PhaseProfile;
pub use accuracy::{accuracy, AccuracyReport};
pub use generate::{generate, generate_matrix, MatrixKind, MatrixSpec};
pub use rng::SplitMix64;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("bad matrix file: {0}")]
    Format(String),

    #[error(transparent)]
    Linalg(#[from] LinalgError),

    /// Inconsistent command arguments that clap cannot catch on its own.
    #[error("{0}")]
    Invalid(String),

    #[error("accuracy check failed: {0}")]
    Threshold(String),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
