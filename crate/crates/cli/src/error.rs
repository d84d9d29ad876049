use std::path::PathBuf;

use clumpsplit::{EvalError, PipelineError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        source: image::ImageError,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub fn image(path: impl Into<PathBuf>) -> impl FnOnce(image::ImageError) -> CliError {
        let path = path.into();
        move |source| CliError::Image { path, source }
    }

    /// 1 for anything to do with files, 2 for bad settings, 3 when the
    /// histogram has no usable valley.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. }
            | CliError::Image { .. }
            | CliError::Format { .. }
            | CliError::Json(_) => 1,
            CliError::Config(_) => 2,
            CliError::Pipeline(e) if e.is_unimodal() => 3,
            CliError::Pipeline(_) => 2,
            CliError::Eval(EvalError::SizeMismatch { .. } | EvalError::DimensionMismatch { .. }) => 1,
            CliError::Eval(_) => 2,
        }
    }
}
