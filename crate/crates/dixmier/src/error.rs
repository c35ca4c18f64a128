use thiserror::Error;

/// Errors raised by the library. Numeric diagnostics that are meant to be
/// reported (non-convergence, divergence under refinement) are returned as
/// values instead.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported dimension {0}; supported dimensions are 1, 2, 3")]
    UnsupportedDimension(usize),
    #[error("sum diverges: s = {s} is not above the threshold {threshold}")]
    Divergent { s: f64, threshold: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("result would be empty: {0}")]
    EmptyResult(String),
    #[error("quadrature tolerance not met: achieved {achieved:e}, requested {requested:e}")]
    ToleranceNotMet { achieved: f64, requested: f64 },
    #[error("Fourier band {band} is smaller than the required {required}")]
    BandTooSmall { band: usize, required: usize },
    #[error("matrix dimension {dim} exceeds the cap {cap}; use the residue route for this size")]
    DimensionCap { dim: usize, cap: usize },
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("sampling resolution {resolution} is insufficient: {reason}")]
    Resolution { resolution: usize, reason: String },
    #[error("divergent tail: partial value {partial}")]
    DivergentTail { partial: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
