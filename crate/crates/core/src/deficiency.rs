//! The deficiency functional `D_n = (S_n^{(p)})^{q/p} - T_n^{(q)}`, the exact
//! representation `zeta(q) = zeta(p)^{q/p} - D_inf`, and the estimator family
//! built on top of it.
//!
//! Convexity of `x -> x^{q/p}` makes every increment of `D_n` nonnegative, so
//! the truncated identity `A_n = zeta(p)^{q/p} - D_n` approaches `zeta(q)`
//! from above at the rate of the base tail. Subtracting the first-order
//! Taylor bias gives `B_n`, which converges at `O(n^{-min(2p-2, q-1)})`;
//! adding back the quadratic Taylor term gives `B2_n`, the next member of the
//! hierarchy.

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::scalar::{lit, power_ratio, recip_power, Real};
use crate::series::{euler_maclaurin_zeta, reference_zeta, Exponent, SeriesTable};

/// Validated base/target exponent pair with `q > p > 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentPair<T> {
    base: Exponent<T>,
    target: Exponent<T>,
    alpha_ratio: T,
}

impl<T: Real> ExponentPair<T> {
    pub fn new(base: Exponent<T>, target: Exponent<T>) -> Result<Self> {
        if target.value() <= base.value() {
            return Err(Error::InvalidPair {
                p: base.value().to_f64().unwrap_or(f64::NAN),
                q: target.value().to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            base,
            target,
            alpha_ratio: target.value() / base.value(),
        })
    }

    /// Convenience constructor from plain scalars.
    pub fn from_values(p: T, q: T) -> Result<Self> {
        // a non-exponent q must still surface the pair-shaped message
        let base = Exponent::new(p)?;
        let target = Exponent::new(q).map_err(|_| Error::InvalidPair {
            p: p.to_f64().unwrap_or(f64::NAN),
            q: q.to_f64().unwrap_or(f64::NAN),
        })?;
        Self::new(base, target)
    }

    #[inline]
    pub fn base(&self) -> Exponent<T> {
        self.base
    }

    #[inline]
    pub fn target(&self) -> Exponent<T> {
        self.target
    }

    /// `q / p`, always greater than 1.
    #[inline]
    pub fn alpha_ratio(&self) -> T {
        self.alpha_ratio
    }
}

/// Convergence exponent of the corrected estimator: `min(2p - 2, q - 1)`.
pub fn predicted_rate<T: Real>(pair: &ExponentPair<T>) -> T {
    let two = lit::<T>(2.0);
    let one = T::one();
    (two * pair.base.value() - two).min(pair.target.value() - one)
}

/// Smallest base exponent attaining the maximal rate `q - 1`, namely
/// `(q + 1) / 2`. Defined for `q > 2`.
pub fn balancing_threshold<T: Real>(target: Exponent<T>) -> Result<T> {
    let q = target.value();
    if q <= lit::<T>(2.0) {
        return Err(Error::ThresholdDomain {
            q: q.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((q + T::one()) / lit::<T>(2.0))
}

/// Base-selection strategies for a given target order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseStrategy {
    /// One base for every target: `p = 2`.
    Universal,
    /// `p = q - 1` for odd integer targets, so the base value has a closed
    /// form; always inside the optimal region.
    ExplicitEven,
}

pub fn recommended_base<T: Real>(
    target: Exponent<T>,
    strategy: BaseStrategy,
) -> Result<Exponent<T>> {
    match strategy {
        BaseStrategy::Universal => Exponent::new(lit::<T>(2.0)),
        BaseStrategy::ExplicitEven => {
            let q = target.value();
            let half = q * lit::<T>(0.5);
            let odd_integer = q.fract() == T::zero() && half.fract() != T::zero();
            if !odd_integer || q < lit::<T>(3.0) {
                return Err(Error::NotOddIntegerTarget {
                    q: q.to_f64().unwrap_or(f64::NAN),
                });
            }
            Exponent::new(q - T::one())
        }
    }
}

/// `D_n` for `n = 1..=n_max`, carried as a running sum of the incremental
/// form's nonnegative surplus terms.
#[derive(Clone, Debug)]
pub struct DeficiencySeries<T> {
    pair: ExponentPair<T>,
    values: Vec<T>,
}

impl<T: Real> DeficiencySeries<T> {
    pub fn pair(&self) -> &ExponentPair<T> {
        &self.pair
    }

    pub fn n_max(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn value_at(&self, n: u64) -> Result<T> {
        if n == 0 || n > self.n_max() {
            return Err(Error::IndexOutOfRange {
                n,
                n_max: self.n_max(),
            });
        }
        Ok(self.values[(n - 1) as usize])
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// `(S_k)^{q/p} - (S_{k-1})^{q/p}` evaluated from the exact prefix step, so
/// the difference keeps full relative accuracy instead of cancelling two
/// O(1) powers.
#[inline]
fn power_step<T: Real>(s_prev: T, step: T, ratio: T) -> T {
    power_ratio(s_prev, ratio) * (ratio * (step / s_prev).ln_1p()).exp_m1()
}

/// Direct evaluation `D_n = (S_n)^{q/p} - T_n` from prebuilt tables.
pub fn deficiency_direct<T: Real>(
    pair: &ExponentPair<T>,
    base_table: &SeriesTable<T>,
    target_table: &SeriesTable<T>,
    n: u64,
) -> Result<T> {
    base_table.check_exponent(pair.base)?;
    target_table.check_exponent(pair.target)?;
    base_table.check_range(n)?;
    target_table.check_range(n)?;
    let s_n = base_table.prefix()[(n - 1) as usize];
    let t_n = target_table.prefix()[(n - 1) as usize];
    Ok(power_ratio(s_n, pair.alpha_ratio) - t_n)
}

/// Incremental construction
/// `D_n = sum_{k=2}^{n} [(S_k)^{q/p} - (S_{k-1})^{q/p} - k^{-q}]`,
/// one sequential pass over the base prefix.
pub fn deficiency_incremental<T: Real>(
    pair: &ExponentPair<T>,
    base_table: &SeriesTable<T>,
    n_max: u64,
) -> Result<DeficiencySeries<T>> {
    base_table.check_exponent(pair.base)?;
    base_table.check_range(n_max)?;
    let ratio = pair.alpha_ratio;
    let qv = pair.target.value();
    let prefix = base_table.prefix();
    let mut acc = KahanSum::new();
    let mut values = Vec::with_capacity(n_max as usize);
    values.push(acc.value());
    for k in 2..=n_max {
        let s_prev = prefix[(k - 2) as usize];
        let step = prefix[(k - 1) as usize] - s_prev;
        acc.add(power_step(s_prev, step, ratio) - recip_power(k, qv));
        values.push(acc.value());
    }
    Ok(DeficiencySeries {
        pair: *pair,
        values,
    })
}

/// The estimator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimatorKind {
    /// Plain truncation `T_n`.
    Truncation,
    /// `A_n = zeta(p)^{q/p} - D_n`.
    DeficiencyA,
    /// `B_n = A_n - (q/p) zeta(p)^{q/p-1} t_n`.
    DeficiencyB,
    /// `B2_n = B_n + [q(q-p)/(2p^2)] zeta(p)^{q/p-2} t_n^2`.
    DeficiencyB2,
    /// Euler-Maclaurin baseline with the given correction order.
    EulerMaclaurin(u32),
}

impl EstimatorKind {
    /// Smallest n the estimator is defined at.
    pub fn min_n(&self) -> u64 {
        match self {
            EstimatorKind::EulerMaclaurin(_) => 2,
            _ => 1,
        }
    }

    /// Whether the estimator consumes the base series at all.
    pub fn needs_base(&self) -> bool {
        matches!(
            self,
            EstimatorKind::DeficiencyA | EstimatorKind::DeficiencyB | EstimatorKind::DeficiencyB2
        )
    }
}

impl std::fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EstimatorKind::Truncation => write!(f, "trunc"),
            EstimatorKind::DeficiencyA => write!(f, "a"),
            EstimatorKind::DeficiencyB => write!(f, "b"),
            EstimatorKind::DeficiencyB2 => write!(f, "b2"),
            EstimatorKind::EulerMaclaurin(m) => write!(f, "em:{m}"),
        }
    }
}

/// Bias correction applied on top of the raw truncated identity.
#[derive(Clone, Copy, Debug)]
pub(crate) enum BiasCorrection<T> {
    None,
    Linear,
    LinearPlusQuadratic(T),
}

/// Shared evaluation core for the A/B/B2 family and its spectral analogue.
///
/// Works on the algebraically identical form
/// `T_n + ([zeta^{q/p} - S_n^{q/p}] - correction)`, with the bracket
/// evaluated through `expm1`/`ln_1p` of the compensated base tail. This
/// keeps full precision even where the bracket and the correction cancel to
/// the last bits of the target sum.
pub(crate) fn corrected_estimate<T: Real>(
    zeta_ref: T,
    ratio: T,
    s_raw: T,
    s_comp: T,
    target_raw: T,
    target_comp: T,
    bias: BiasCorrection<T>,
) -> T {
    let tail = (zeta_ref - s_raw) - s_comp;
    let s_fold = s_raw + s_comp;
    let delta = power_step(s_fold, tail, ratio);
    let mut bracket = delta;
    match bias {
        BiasCorrection::None => {}
        BiasCorrection::Linear => {
            let coeff = ratio * power_ratio(zeta_ref, ratio - T::one());
            bracket = bracket - coeff * tail;
        }
        BiasCorrection::LinearPlusQuadratic(quad_coeff) => {
            let coeff = ratio * power_ratio(zeta_ref, ratio - T::one());
            bracket = (bracket - coeff * tail) + quad_coeff * tail * tail;
        }
    }
    target_raw + (bracket + target_comp)
}

/// Prebuilt inputs shared by every estimator evaluation for one pair.
pub struct EstimatorContext<'a, T> {
    pair: ExponentPair<T>,
    base: &'a SeriesTable<T>,
    target: &'a SeriesTable<T>,
    zeta_base: T,
}

impl<'a, T: Real> EstimatorContext<'a, T> {
    /// Builds a context with the default reference value for `zeta(p)`.
    pub fn new(
        pair: ExponentPair<T>,
        base: &'a SeriesTable<T>,
        target: &'a SeriesTable<T>,
    ) -> Result<Self> {
        let zeta_base = reference_zeta(pair.base);
        Self::with_reference(pair, base, target, zeta_base)
    }

    /// Builds a context with a caller-supplied reference for `zeta(p)`.
    pub fn with_reference(
        pair: ExponentPair<T>,
        base: &'a SeriesTable<T>,
        target: &'a SeriesTable<T>,
        zeta_base: T,
    ) -> Result<Self> {
        base.check_exponent(pair.base)?;
        target.check_exponent(pair.target)?;
        if !zeta_base.is_finite() {
            return Err(Error::NonFiniteReference);
        }
        Ok(Self {
            pair,
            base,
            target,
            zeta_base,
        })
    }

    pub fn pair(&self) -> &ExponentPair<T> {
        &self.pair
    }

    pub fn zeta_base(&self) -> T {
        self.zeta_base
    }

    pub fn n_max(&self) -> u64 {
        self.base.n_max().min(self.target.n_max())
    }

    fn quadratic_coefficient(&self) -> T {
        let p = self.pair.base.value();
        let q = self.pair.target.value();
        let c = q * (q - p) / (lit::<T>(2.0) * p * p);
        c * power_ratio(self.zeta_base, self.pair.alpha_ratio - lit::<T>(2.0))
    }
}

/// Evaluates one estimator at `n`.
pub fn estimate<T: Real>(kind: EstimatorKind, ctx: &EstimatorContext<'_, T>, n: u64) -> Result<T> {
    ctx.target.check_range(n)?;
    if kind.needs_base() {
        ctx.base.check_range(n)?;
    }
    let bias = match kind {
        EstimatorKind::Truncation => return ctx.target.partial(n),
        EstimatorKind::EulerMaclaurin(m) => {
            return euler_maclaurin_zeta(ctx.pair.target, n, m);
        }
        EstimatorKind::DeficiencyA => BiasCorrection::None,
        EstimatorKind::DeficiencyB => BiasCorrection::Linear,
        EstimatorKind::DeficiencyB2 => {
            BiasCorrection::LinearPlusQuadratic(ctx.quadratic_coefficient())
        }
    };
    let (s_raw, s_comp) = ctx.base.partial_parts(n)?;
    let (t_raw, t_comp) = ctx.target.partial_parts(n)?;
    Ok(corrected_estimate(
        ctx.zeta_base,
        ctx.pair.alpha_ratio,
        s_raw,
        s_comp,
        t_raw,
        t_comp,
        bias,
    ))
}

/// `A_n` through the rearranged identity `T_n + [zeta(p)^{q/p} - (S_n)^{q/p}]`
/// with both powers evaluated literally. Exists solely as a consistency
/// oracle against [`estimate`] with [`EstimatorKind::DeficiencyA`].
pub fn algebraic_form_a<T: Real>(ctx: &EstimatorContext<'_, T>, n: u64) -> Result<T> {
    ctx.base.check_range(n)?;
    ctx.target.check_range(n)?;
    let ratio = ctx.pair.alpha_ratio;
    let s_n = ctx.base.prefix()[(n - 1) as usize];
    let t_n = ctx.target.prefix()[(n - 1) as usize];
    Ok(t_n + (power_ratio(ctx.zeta_base, ratio) - power_ratio(s_n, ratio)))
}
