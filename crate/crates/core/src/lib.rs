//! Deficiency-based approximation of Riemann and spectral zeta values.
//!
//! For `q > p > 1` the gap between aggregating-then-transforming and
//! transforming-then-aggregating a base series,
//!
//! ```text
//! D_n = (S_n^{(p)})^{q/p} - T_n^{(q)},   S_n^{(p)} = sum_{k<=n} k^{-p},
//! ```
//!
//! is nonnegative, nondecreasing, and converges to `zeta(p)^{q/p} - zeta(q)`.
//! Truncating that representation and cancelling the leading Taylor bias of
//! the base tail yields a family of estimators whose convergence exponent
//! `min(2p - 2, q - 1)` is tunable through the base exponent. The same
//! construction applies verbatim to spectral zeta functions
//! `zeta_L(s) = sum_k lambda_k^{-s}`.
//!
//! Modules:
//! - [`series`]: partial sums, Bernoulli numbers, Euler's closed form for
//!   even orders, and the Euler-Maclaurin evaluator used as the reference
//!   oracle.
//! - [`deficiency`]: the deficiency functional, its incremental form, the
//!   estimator family and the rate theory.
//! - [`spectral`]: the spectral generalization and eigenvalue-file
//!   validation.
//! - [`analysis`]: error series, log-log slope fits, plateau detection.
//!
//! Everything is generic over the floating-point scalar through
//! [`scalar::Real`]; the `*64` aliases below fix `f64`, the working precision
//! all tolerances in this crate are calibrated for.

pub mod analysis;
pub mod deficiency;
pub mod error;
pub mod kahan;
pub mod scalar;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` working-precision aliases.
pub type Exponent64 = series::Exponent<f64>;
pub type SeriesTable64 = series::SeriesTable<f64>;
pub type BernoulliCache64 = series::BernoulliCache<f64>;
pub type ExponentPair64 = deficiency::ExponentPair<f64>;
pub type DeficiencySeries64 = deficiency::DeficiencySeries<f64>;
pub type SpectrumSource64 = spectral::SpectrumSource<f64>;
pub type SpectralPair64 = spectral::SpectralPair<f64>;
pub type ErrorSeries64 = analysis::ErrorSeries<f64>;
pub type RateReport64 = analysis::RateReport<f64>;
pub type AnalysisOptions64 = analysis::AnalysisOptions<f64>;
