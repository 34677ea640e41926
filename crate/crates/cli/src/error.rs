use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Numerical {
        context: &'static str,
        #[source]
        source: twistcav::Error,
    },

    #[error("threshold failure: {0}")]
    Threshold(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical { .. } => 2,
            CliError::Threshold(_) => 3,
        }
    }
}

/// Attaches a module context to library errors.
pub trait Context<T> {
    fn context(self, context: &'static str) -> Result<T, CliError>;
}

impl<T> Context<T> for twistcav::Result<T> {
    fn context(self, context: &'static str) -> Result<T, CliError> {
        self.map_err(|source| match source {
            // Invalid physical inputs come from the config.
            twistcav::Error::Domain(msg) => CliError::Config(format!("{context}: {msg}")),
            source => CliError::Numerical { context, source },
        })
    }
}
