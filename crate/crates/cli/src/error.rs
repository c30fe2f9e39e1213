use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: u64, message: String },
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: ttvar_core::Error,
    },
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    /// 2 for bad input or configuration, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core { source, .. } if source.is_numerical() => 3,
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }

    pub fn core(context: impl Into<String>, source: ttvar_core::Error) -> Self {
        CliError::Core {
            context: context.into(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
