//! Crate-wide error type. Offending values are carried as `f64` for message
//! rendering regardless of the working scalar type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent must be finite and greater than 1, got {value}")]
    ExponentOutOfRange { value: f64 },

    #[error("invalid exponent pair (p={p}, q={q}): requires q > p > 1")]
    InvalidPair { p: f64, q: f64 },

    #[error("n must be at least 1")]
    ZeroIndex,

    #[error("n={n} is outside the table range 1..={n_max}")]
    IndexOutOfRange { n: u64, n_max: u64 },

    #[error("n_max={n_max} exceeds the configured table cap of {cap} entries")]
    TableCapExceeded { n_max: u64, cap: u64 },

    #[error("table built for exponent {found} cannot serve exponent {expected}")]
    TableMismatch { expected: f64, found: f64 },

    #[error("Bernoulli index {index} exceeds the configured cap {cap}")]
    BernoulliCapExceeded { index: u32, cap: u32 },

    #[error("Bernoulli cache is built up to an even index, got {index}")]
    BernoulliIndexOdd { index: u32 },

    #[error("Euler-Maclaurin evaluation requires n >= 2, got {n}")]
    EulerMaclaurinRange { n: u64 },

    #[error("balancing threshold is defined for q > 2, got {q}")]
    ThresholdDomain { q: f64 },

    #[error("explicit even base requires an odd integer target q >= 3, got {q}")]
    NotOddIntegerTarget { q: f64 },

    #[error("power-law spectrum requires finite alpha > 0, got {alpha}")]
    InvalidAlpha { alpha: f64 },

    #[error("spectral exponent must be finite and positive, got {value}")]
    SpectralExponentOutOfRange { value: f64 },

    #[error("divergent spectral configuration: requires alpha*s > 1, got alpha={alpha}, s={s}")]
    DivergentSpectrum { alpha: f64, s: f64 },

    #[error("n={n} exceeds the explicit spectrum length {k_max}")]
    SpectrumExhausted { n: u64, k_max: u64 },

    #[error("spectrum line {line}: {reason}")]
    SpectrumFormat { line: usize, reason: String },

    #[error("reference value must be finite")]
    NonFiniteReference,

    #[error("estimator failed at n={n}: {source}")]
    EstimateAt {
        n: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("grid must be nonempty and strictly increasing")]
    InvalidGrid,

    #[error("error values must be finite and nonnegative")]
    InvalidErrorValue,

    #[error("fit window [{n_lo}, {n_hi}] holds {have} unsaturated points, need at least {need}")]
    InsufficientPoints {
        n_lo: u64,
        n_hi: u64,
        have: usize,
        need: usize,
    },

    #[error("every point sits below the saturation floor; no rate can be fitted")]
    FullySaturated,

    #[error("points above the saturation region span less than one decade; cannot select a fit window")]
    WindowTooNarrow,

    #[error("scaling exponent must be positive, got {value}")]
    NonPositiveScaling { value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
