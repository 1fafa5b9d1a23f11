//! Scalar abstraction: every numeric routine in this crate is generic over a
//! floating-point type implementing [`Real`]. Concrete aliases for `f64` live
//! at the crate root.

use std::fmt::{Debug, Display};
use std::ops::AddAssign;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar usable by the series and estimator machinery.
pub trait Real:
    Float + FloatConst + FromPrimitive + AddAssign + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar type.
///
/// Panics only if the target type cannot represent ordinary literals, which
/// no `Real` implementation does.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal conversion")
}

/// Converts a series index into the working scalar type.
#[inline]
pub(crate) fn from_index<T: Real>(k: u64) -> T {
    T::from_u64(k).expect("index conversion")
}

/// `x^alpha` evaluated as `exp(alpha * ln x)`, valid for `x > 0`.
///
/// All aggregate powers `(S_n)^{q/p}` go through this single function so the
/// classical and spectral paths stay bit-for-bit consistent.
#[inline]
pub fn power_ratio<T: Real>(x: T, alpha: T) -> T {
    (alpha * x.ln()).exp()
}

/// `k^{-s}` for a positive integer index, the shared term function of every
/// partial sum in the crate.
#[inline]
pub fn recip_power<T: Real>(k: u64, s: T) -> T {
    from_index::<T>(k).powf(-s)
}
