use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum HoloError {
    #[error("invalid field dimensions {width}x{height}: both must be even and at least 2")]
    InvalidDimensions { width: usize, height: usize },

    #[error("field data has {actual} values, expected {expected}")]
    DataLength { expected: usize, actual: usize },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("invalid modulation scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate window: {0}")]
    DegenerateWindow(String),

    #[error("no normalizer for image `{0}`")]
    NoNormalizer(String),

    #[error("underdetermined: {0}")]
    Underdetermined(String),

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("image error for `{path}`: {message}")]
    Image { path: String, message: String },

    #[error("I/O error for `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl HoloError {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        HoloError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T, E = HoloError> = std::result::Result<T, E>;
