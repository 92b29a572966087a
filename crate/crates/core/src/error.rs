use thiserror::Error;

/// Errors raised by the model, operator, and diagnostic layers.
///
/// Scientific outcomes (blow-up, non-scattering, a violated smallness
/// condition) are reported as data in the respective report types; only
/// misuse and numerical breakdown end up here.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("field lives on a grid with {found} cells, operator expects {expected}")]
    GridMismatch { expected: usize, found: usize },

    #[error("field is identically zero")]
    ZeroField,

    #[error("weighted potential term vanishes; quotient undefined")]
    ZeroPotential,

    #[error("gauge factor overflow: exp({exponent}) is not representable")]
    GaugeOverflow { exponent: f64 },

    #[error("regime mismatch: {operation} requires {expected}, got {found}")]
    WrongRegime {
        operation: &'static str,
        expected: &'static str,
        found: String,
    },

    #[error(
        "minimisation stopped after {iterations} iterations without converging \
         (relative decrease {last_decrease:e}, gradient norm {gradient_norm:e})"
    )]
    NotConverged {
        iterations: usize,
        last_decrease: f64,
        gradient_norm: f64,
    },

    #[error("degenerate Euler-Lagrange rescaling (amplitude {amplitude}, dilation {dilation})")]
    DegenerateScaling { amplitude: f64, dilation: f64 },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("observable is not positive at t = {t}")]
    NonPositiveObservable { t: f64 },

    #[error("Lebesgue exponent r = {r} outside the dispersive range {range}")]
    ExponentOutOfRange { r: f64, range: String },

    #[error("scan list is empty")]
    EmptyScan,

    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
