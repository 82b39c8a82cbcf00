use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alist line {line}: {msg}")]
    Alist { line: usize, msg: String },

    #[error("invalid matrix: {0}")]
    Matrix(String),

    #[error("code is not (d_v, d_c)-regular: {0}")]
    Irregular(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },

    #[error("distribution is not symmetric (max deviation {deviation:e})")]
    Asymmetric { deviation: f64 },

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("invalid tree shape: {0}")]
    Shape(String),

    #[error("tree mismatch: {0}")]
    Tree(String),

    #[error("label {label} out of range for alphabet of size {size}")]
    LabelRange { label: usize, size: usize },

    #[error("channel below design threshold: mutual information is zero at {stage}")]
    BelowThreshold { stage: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("artifact error: {0}")]
    Artifact(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
