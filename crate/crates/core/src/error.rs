use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("factor {index} ({desc}): {msg}")]
    InvalidFactor { index: usize, desc: String, msg: String },
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not dominant: {0}")]
    NotDominant(String),
    #[error("subset J = {0} is not stable under the Galois action")]
    NotGaloisStable(String),
    #[error("{0} is not a minimal coset representative")]
    NotInJW(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("search bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("integrity error: {0}")]
    Integrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
