use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("weight vector has a negative entry")]
    NegativeWeight,

    #[error("weight vector is zero")]
    ZeroWeight,

    #[error("operation undefined for the zero ideal")]
    ZeroIdeal,

    #[error("the sequence presentation has no exact limit polyhedron; pass an explicit approximation index instead")]
    InexactLimit,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type CoreResult<T> = Result<T, CoreError>;
