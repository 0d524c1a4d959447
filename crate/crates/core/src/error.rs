use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed number literal {0:?}")]
    BadNumber(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("all coefficients are zero")]
    AllZero,
    #[error("empty point set")]
    EmptyPoints,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("enumeration gate exceeded: {0}")]
    Gate(String),
    #[error("no convergent fits coefficient {index}: {detail}")]
    NoConvergent { index: usize, detail: String },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
