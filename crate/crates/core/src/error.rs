use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid too small: boundary amplitude {boundary:.3e} exceeds 1e-10 of peak {peak:.3e}")]
    GridTooSmall { boundary: f64, peak: f64 },

    #[error("non-normalizable state: D = ac - Re(b)^2 = {0} must be > 0")]
    NonNormalizable(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid observable `{label}`: {reason}")]
    InvalidObservable { label: String, reason: String },

    #[error("unknown observable label `{0}` for this state")]
    UnknownObservable(String),

    #[error("observable `{0}` is incompatible with the state representation")]
    Incompatible(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("third observable is deterministic: X33 = {x33:.3e} <= {threshold:.3e}")]
    DeterministicThird { x33: f64, threshold: f64 },

    #[error("wrong regime: {0}")]
    WrongRegime(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation: {0}")]
    Truncation(String),

    #[error("quadrature accuracy: {0}")]
    Accuracy(String),

    #[error("malformed input: {0}")]
    Parse(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
