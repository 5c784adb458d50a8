use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("permutation: {0}")]
    Perm(String),
    #[error("graded space: {0}")]
    Space(String),
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("degree: {0}")]
    Degree(String),
    #[error("arity {requested} exceeds the truncation arity {max}")]
    Truncation { requested: usize, max: usize },
    #[error("structure: {0}")]
    Structure(String),
    #[error("format: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
