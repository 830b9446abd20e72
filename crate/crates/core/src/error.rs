use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(Field, Field),
    #[error("{0} is not a prime below 2^31")]
    BadModulus(u32),
    #[error("unknown field descriptor `{0}` (expected q, q(w) or gf:<p>)")]
    BadDescriptor(String),
    #[error("{0} has no image in GF({1})")]
    NotInvertible(String, u32),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("rows have different lengths")]
    Ragged,
    #[error("matrix is singular")]
    Singular,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("parameter `{0}` has no value")]
    Unevaluated(String),
    #[error("linear map is not invertible")]
    Singular,
    #[error("linear map is not an automorphism")]
    NotAutomorphism,
    #[error("algebra has zero annihilator")]
    NoAnnihilator,
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("operation requires {0}")]
    UnsupportedField(String),
}

/// Syntax error in a coefficient expression, located by byte offset.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{message} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("entry {entry}: {message}")]
    Schema { entry: String, message: String },
    #[error("duplicate entry name {0}")]
    Duplicate(String),
    #[error("unknown entry {0}")]
    Unknown(String),
    #[error("entry {entry}: coefficient `{text}`: {source}")]
    Coeff {
        entry: String,
        text: String,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
