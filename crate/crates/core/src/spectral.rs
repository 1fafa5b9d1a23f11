//! Spectral zeta functions `zeta_L(s) = sum_k lambda_k^{-s}` over positive
//! nondecreasing eigenvalue sequences, with the deficiency identity and the
//! corrected estimator transplanted from the classical case.
//!
//! For a power-law spectrum `lambda_k = k^alpha` every partial sum reduces to
//! the classical one at exponent `alpha * s`, hence
//! `zeta_L(s) = zeta(alpha s)`; the power-law paths below share the exact
//! term function of the classical module so this identity holds bit for bit.

use crate::deficiency::{corrected_estimate, BiasCorrection};
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::scalar::{power_ratio, recip_power, Real};
use crate::series::Exponent;

/// Eigenvalue generator: either `lambda_k = k^alpha` or an explicit finite
/// list.
#[derive(Clone, Debug)]
pub enum SpectrumSource<T> {
    PowerLaw { alpha: T },
    Explicit { eigenvalues: Vec<T> },
}

impl<T: Real> SpectrumSource<T> {
    pub fn power_law(alpha: T) -> Result<Self> {
        if !alpha.is_finite() || alpha <= T::zero() {
            return Err(Error::InvalidAlpha {
                alpha: alpha.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self::PowerLaw { alpha })
    }

    /// Validates positivity, finiteness and the nondecreasing order; ties are
    /// allowed. Index reporting is 1-based to match the file format.
    pub fn explicit(eigenvalues: Vec<T>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::SpectrumFormat {
                line: 0,
                reason: "no eigenvalues".into(),
            });
        }
        let mut prev = T::zero();
        for (i, &ev) in eigenvalues.iter().enumerate() {
            if !ev.is_finite() || ev <= T::zero() {
                return Err(Error::SpectrumFormat {
                    line: i + 1,
                    reason: format!("eigenvalue must be a finite positive number, got {ev}"),
                });
            }
            if ev < prev {
                return Err(Error::SpectrumFormat {
                    line: i + 1,
                    reason: format!("eigenvalues must be nondecreasing, {ev} follows {prev}"),
                });
            }
            prev = ev;
        }
        Ok(Self::Explicit { eigenvalues })
    }

    /// Parses the eigenvalue file format: one strictly positive decimal per
    /// line, `#` starts a comment line, blank lines are skipped, values must
    /// be nondecreasing. Errors carry the offending line number.
    pub fn parse_text(text: &str) -> Result<Self>
    where
        T: std::str::FromStr,
    {
        let mut eigenvalues: Vec<T> = Vec::new();
        let mut prev: Option<T> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let ev: T = trimmed.parse().map_err(|_| Error::SpectrumFormat {
                line,
                reason: format!("cannot parse `{trimmed}` as a number"),
            })?;
            if !ev.is_finite() {
                return Err(Error::SpectrumFormat {
                    line,
                    reason: "eigenvalue must be finite".into(),
                });
            }
            if ev <= T::zero() {
                return Err(Error::SpectrumFormat {
                    line,
                    reason: format!("eigenvalue must be strictly positive, got {ev}"),
                });
            }
            if let Some(p) = prev {
                if ev < p {
                    return Err(Error::SpectrumFormat {
                        line,
                        reason: format!("eigenvalues must be nondecreasing, {ev} follows {p}"),
                    });
                }
            }
            prev = Some(ev);
            eigenvalues.push(ev);
        }
        if eigenvalues.is_empty() {
            return Err(Error::SpectrumFormat {
                line: 0,
                reason: "file holds no eigenvalues".into(),
            });
        }
        Ok(Self::Explicit { eigenvalues })
    }

    /// Number of available eigenvalues; unbounded for power laws.
    pub fn k_max(&self) -> Option<u64> {
        match self {
            Self::PowerLaw { .. } => None,
            Self::Explicit { eigenvalues } => Some(eigenvalues.len() as u64),
        }
    }

    fn check_available(&self, n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        if let Some(k_max) = self.k_max() {
            if n > k_max {
                return Err(Error::SpectrumExhausted { n, k_max });
            }
        }
        Ok(())
    }

    /// `lambda_k^{-s}`. Power-law terms reuse the classical term function at
    /// exponent `alpha * s`.
    #[inline]
    fn term(&self, k: u64, s: T) -> T {
        match self {
            Self::PowerLaw { alpha } => recip_power(k, *alpha * s),
            Self::Explicit { eigenvalues } => eigenvalues[(k - 1) as usize].powf(-s),
        }
    }
}

fn check_spectral_exponent<T: Real>(s: T) -> Result<()> {
    if !s.is_finite() || s <= T::zero() {
        return Err(Error::SpectralExponentOutOfRange {
            value: s.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Raw sum and compensation of `sum_{k=1}^{n} lambda_k^{-s}`.
pub(crate) fn spectral_prefix<T: Real>(
    source: &SpectrumSource<T>,
    s: T,
    n: u64,
) -> Result<(T, T)> {
    check_spectral_exponent(s)?;
    source.check_available(n)?;
    let mut acc = KahanSum::new();
    for k in 1..=n {
        acc.add(source.term(k, s));
    }
    Ok((acc.raw(), acc.compensation()))
}

/// Compensated ascending-k sum of `lambda_k^{-s}`.
pub fn spectral_partial_sum<T: Real>(source: &SpectrumSource<T>, s: T, n: u64) -> Result<T> {
    let (raw, comp) = spectral_prefix(source, s, n)?;
    Ok(raw + comp)
}

/// A spectrum with a validated exponent pair. For power laws the convergence
/// conditions `alpha * p > 1` and `alpha * q > 1` are enforced; explicit
/// spectra are inherently truncated, so only partial sums up to their length
/// are ever defined and no limit claims attach to them.
#[derive(Clone, Debug)]
pub struct SpectralPair<T> {
    source: SpectrumSource<T>,
    base: Exponent<T>,
    target: Exponent<T>,
}

impl<T: Real> SpectralPair<T> {
    pub fn new(source: SpectrumSource<T>, base: Exponent<T>, target: Exponent<T>) -> Result<Self> {
        if target.value() <= base.value() {
            return Err(Error::InvalidPair {
                p: base.value().to_f64().unwrap_or(f64::NAN),
                q: target.value().to_f64().unwrap_or(f64::NAN),
            });
        }
        if let SpectrumSource::PowerLaw { alpha } = &source {
            for s in [base.value(), target.value()] {
                if *alpha * s <= T::one() {
                    return Err(Error::DivergentSpectrum {
                        alpha: alpha.to_f64().unwrap_or(f64::NAN),
                        s: s.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        Ok(Self {
            source,
            base,
            target,
        })
    }

    pub fn source(&self) -> &SpectrumSource<T> {
        &self.source
    }

    pub fn base(&self) -> Exponent<T> {
        self.base
    }

    pub fn target(&self) -> Exponent<T> {
        self.target
    }

    pub fn alpha_ratio(&self) -> T {
        self.target.value() / self.base.value()
    }
}

/// Spectral deficiency `D_n = (S_n^{(p)})^{q/p} - sum_{k<=n} lambda_k^{-q}`.
pub fn spectral_deficiency<T: Real>(pair: &SpectralPair<T>, n: u64) -> Result<T> {
    let (s_raw, _) = spectral_prefix(&pair.source, pair.base.value(), n)?;
    let (t_raw, _) = spectral_prefix(&pair.source, pair.target.value(), n)?;
    Ok(power_ratio(s_raw, pair.alpha_ratio()) - t_raw)
}

/// Bias-corrected spectral estimate
/// `zeta_L(p)^{q/p} - D_n - (q/p) zeta_L(p)^{q/p-1} (zeta_L(p) - S_n)`.
///
/// The reference `zeta_L(p)` comes from the caller: for a power law it can be
/// taken from the classical reference at exponent `alpha * p`, for an
/// explicit spectrum it is the full-array sum.
pub fn spectral_estimator<T: Real>(
    pair: &SpectralPair<T>,
    n: u64,
    zeta_l_base: T,
) -> Result<T> {
    if !zeta_l_base.is_finite() {
        return Err(Error::NonFiniteReference);
    }
    let (s_raw, s_comp) = spectral_prefix(&pair.source, pair.base.value(), n)?;
    let (t_raw, t_comp) = spectral_prefix(&pair.source, pair.target.value(), n)?;
    Ok(corrected_estimate(
        zeta_l_base,
        pair.alpha_ratio(),
        s_raw,
        s_comp,
        t_raw,
        t_comp,
        BiasCorrection::Linear,
    ))
}

/// Balancing threshold for a power-law spectrum: `(alpha q + 1) / (2 alpha)`.
pub fn spectral_threshold<T: Real>(alpha: T, target: Exponent<T>) -> Result<T> {
    if !alpha.is_finite() || alpha <= T::zero() {
        return Err(Error::InvalidAlpha {
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
        });
    }
    let q = target.value();
    if alpha * q <= T::one() {
        return Err(Error::DivergentSpectrum {
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
            s: q.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((alpha * q + T::one()) / ((T::one() + T::one()) * alpha))
}
