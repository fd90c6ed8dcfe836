use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("config error: `{key}`: {message}")]
    Config { key: String, message: String },
    #[error("experiment failed: assertion `{0}` did not hold")]
    ExperimentFailed(String),
    #[error("malformed wave-function file: {0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] quantalab_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl LabError {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}
