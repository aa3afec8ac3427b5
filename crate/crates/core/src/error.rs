use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("grid mismatch between fields: {0}")]
    GridMismatch(String),
    #[error("invalid propagation distance {0} m (must be > 0)")]
    NonPositiveDistance(f64),
    #[error("invalid lens focal length (must be nonzero)")]
    ZeroFocalLength,
    #[error("element does not fit the grid: {0}")]
    ElementOutsideGrid(String),
    #[error("source undersampled: {0}")]
    Undersampled(String),
    #[error("invalid crystal parameters: {0}")]
    InvalidCrystalParams(String),
    #[error("profile analysis failed: {0}")]
    Analysis(String),
    #[error("invalid configuration:\n{}", .0.join("\n"))]
    Config(Vec<String>),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv parse error: line {line}: {message}")]
    CsvFormat { line: usize, message: String },
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
