use thiserror::Error;

/// Errors produced by grid construction, discretization, the eigensolver
/// and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid signal: {0}")]
    Signal(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix not symmetric: max asymmetry {0:e}")]
    NotSymmetric(f64),

    #[error("eigensolver failed to converge for eigenvalue index {0}")]
    NoConvergence(usize),

    #[error("lambda too low for this signal")]
    LambdaTooLow,

    #[error("config error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("invariant failure: {0}")]
    Invariant(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<String>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    /// CLI exit code: 2 config, 3 data, 4 invariant, 1 everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Param(_) => 2,
            Error::Data(_) | Error::Io { .. } => 3,
            Error::Invariant(_) => 4,
            _ => 1,
        }
    }
}
