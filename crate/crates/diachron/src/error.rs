use std::io;
use std::path::{Path, PathBuf};

/// Every failure the driver can report, grouped by who has to act on it.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The run configuration is invalid or refers to missing inputs.
    #[error("configuration error: {0}")]
    Config(String),
    /// Input data is malformed or unusable.
    #[error("data error: {0}")]
    Data(String),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    /// A bug, or an inconsistency between artifacts this tool wrote itself.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Self::Data(msg.into())
    }

    pub fn read(path: &Path, source: io::Error) -> Self {
        Self::Read {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn write(path: &Path, source: io::Error) -> Self {
        Self::Write {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Process exit status: 2 for configuration, 3 for data, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Data(_) | Self::Read { .. } => 3,
            Self::Write { .. } | Self::Internal(_) => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct_per_category() {
        assert_eq!(Error::config("x").exit_code(), 2);
        assert_eq!(Error::data("x").exit_code(), 3);
        assert_eq!(
            Error::read(Path::new("f"), io::ErrorKind::NotFound.into()).exit_code(),
            3
        );
        assert_eq!(Error::Internal("x".into()).exit_code(), 1);
    }
}
