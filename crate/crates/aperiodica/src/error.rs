//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("degenerate internal window: {0}")]
    DegenerateWindow(String),

    #[error("displacement amplitude {epsilon} too large for spacing {spacing}")]
    EpsilonTooLarge { epsilon: f64, spacing: f64 },

    #[error("compact set K is not contained in the data window")]
    KOutsideWindow,

    #[error("empty basis: A \\ C is empty for some member of the hitting family")]
    EmptyBasis,

    #[error("zero binning on non-FLC input: {0} distinct displacements")]
    NonFlcWithZeroBinning(usize),

    #[error("sigma is not normalized: integral is {0}, expected 1")]
    SigmaNotNormalized(f64),

    #[error("support exceeds the available data window: {0}")]
    TruncatedSupport(String),

    #[error("requested range {requested} exceeds available range {available}")]
    RangeExceeded { requested: f64, available: f64 },

    #[error("zero denominator: ||f_phi||^2 below 1e-12")]
    ZeroDenominator,

    #[error("purity {0} below the pure-point gate 0.95")]
    NotPurePoint(f64),

    #[error("scan grid too coarse: step {step} exceeds {max_step}")]
    GridTooCoarse { step: f64, max_step: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
