use thiserror::Error;

use crate::algebra::FieldTag;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("field tag mismatch: {0} vs {1}")]
    TagMismatch(FieldTag, FieldTag),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("operation not defined over {0}: {1}")]
    UnsupportedField(FieldTag, String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("value has no exact representation: {0}")]
    NotExact(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
