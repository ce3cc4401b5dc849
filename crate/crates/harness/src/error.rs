use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed records: {0}")]
    Records(String),
    #[error("trial {index}: {source}")]
    Trial {
        index: u64,
        #[source]
        source: haarlab_core::Error,
    },
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }

    /// 2 for numerical failures inside a trial, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Trial { source, .. } if source.is_numerical() => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerical_trial_failures_exit_with_two() {
        let numerical = HarnessError::Trial { index: 0, source: haarlab_core::Error::Numerical("nan".into()) };
        let caller = HarnessError::Trial { index: 0, source: haarlab_core::Error::InvalidArgument("m".into()) };
        assert_eq!(numerical.exit_code(), 2);
        assert_eq!(caller.exit_code(), 1);
        assert_eq!(HarnessError::Config("x".into()).exit_code(), 1);
    }
}
