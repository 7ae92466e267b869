use thiserror::Error;

/// Failures that map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}: line {line}, column {column}: {message}")]
    Syntax {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{origin}: field `{field}`: {message}")]
    Field {
        origin: String,
        field: String,
        message: String,
    },
    #[error("{origin}: {source}")]
    State {
        origin: String,
        source: qcorr_core::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] qcorr_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub const EXIT_CODE: u8 = 2;
}
