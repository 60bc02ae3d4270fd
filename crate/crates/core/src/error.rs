use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input set")]
    EmptyInput,
    #[error("{fn_name} is not defined at {value}")]
    Domain { fn_name: String, value: String },
    #[error("{fn_name} is not injective on the input ({left} and {right} collide)")]
    NonInjective {
        fn_name: String,
        left: String,
        right: String,
    },
    #[error("log-like functions are never evaluated; use the product set (|f(A)+f(A)| = |A*A|)")]
    LogEvaluation,
    #[error("product set requires strictly positive elements for log equivalence, found {0}")]
    NonPositive(String),
    #[error("tau must be at least 1")]
    InvalidTau,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("comparison undecided: {0}")]
    Undecided(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
