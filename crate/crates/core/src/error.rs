use thiserror::Error;

/// Errors produced by the schemes, operators and the scenario runner.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid frequency {0}: omega must be positive and finite")]
    InvalidFrequency(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A step produced a non-finite value or the state norm grew past the
    /// instability threshold.
    #[error("numeric overflow (instability) at step {step}")]
    Instability { step: u64 },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Operator applied to a field of the wrong kind, or fields on different grids.
    #[error("signature error: {0}")]
    Signature(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("empty series")]
    EmptySeries,

    #[error("i/o error: {0}")]
    Io(String),

    #[error("config error: {0}")]
    Config(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be positive and finite, got {value}"),
        })
    }
}
