//! Convergence diagnostics: absolute-error series against a reference value,
//! log-log slope fitting, scaled-error plateau detection and rate reports.

use crate::deficiency::{predicted_rate, EstimatorKind, ExponentPair};
use crate::error::{Error, Result};
use crate::scalar::{from_index, lit, Real};

/// Absolute-error floor treated as saturated: below roughly one ulp of a
/// zeta-sized value, binary64 differences no longer track true convergence.
pub const DEFAULT_SATURATION_FLOOR: f64 = 1e-16;

/// Fit windows end at the last point whose error is at least
/// `FIT_GUARD * floor`. Within about two decades of the floor a measured
/// error of magnitude `e` carries last-place quantization of relative size
/// `ulp / e`, so log-log fits there measure rounding noise instead of the
/// decay rate.
pub const FIT_GUARD: f64 = 100.0;

/// A scaled series counts as a plateau when (max - min) / median over the
/// fit window stays at or below this spread.
pub const PLATEAU_MAX_SPREAD: f64 = 0.2;

/// Minimum number of unsaturated points a slope fit requires.
pub const MIN_FIT_POINTS: usize = 5;

/// Default density of geometric sweep grids.
pub const DEFAULT_POINTS_PER_DECADE: u32 = 40;

/// Knobs of the diagnostics; `Default` reproduces the documented constants.
#[derive(Clone, Copy, Debug)]
pub struct AnalysisOptions<T> {
    pub saturation_floor: T,
    pub fit_guard: T,
    pub plateau_max_spread: T,
}

impl<T: Real> Default for AnalysisOptions<T> {
    fn default() -> Self {
        Self {
            saturation_floor: lit(DEFAULT_SATURATION_FLOOR),
            fit_guard: lit(FIT_GUARD),
            plateau_max_spread: lit(PLATEAU_MAX_SPREAD),
        }
    }
}

/// Geometric grid of integer evaluation points from `lo` to `hi` inclusive,
/// `per_decade` points per factor of ten, deduplicated after rounding.
pub fn geometric_grid(lo: u64, hi: u64, per_decade: u32) -> Vec<u64> {
    assert!(lo >= 1 && per_decade >= 1);
    if hi < lo {
        return Vec::new();
    }
    let mut grid = Vec::new();
    let mut push = |n: u64| {
        if n >= lo && n <= hi && grid.last() != Some(&n) {
            grid.push(n);
        }
    };
    let mut j = 0u64;
    loop {
        let x = 10f64.powf(j as f64 / per_decade as f64);
        if !x.is_finite() || x > hi as f64 + 0.5 {
            break;
        }
        push(x.round() as u64);
        j += 1;
    }
    push(hi);
    if grid.first() != Some(&lo) {
        grid.insert(0, lo);
    }
    grid
}

/// One grid point of an error curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorPoint<T> {
    pub n: u64,
    pub abs_error: T,
}

/// Absolute errors `|estimate(n) - reference|` over an increasing grid.
#[derive(Clone, Debug)]
pub struct ErrorSeries<T> {
    kind: EstimatorKind,
    label: String,
    points: Vec<ErrorPoint<T>>,
    floor: T,
}

impl<T: Real> ErrorSeries<T> {
    /// Wraps precomputed points; validates ordering and values.
    pub fn from_points(
        kind: EstimatorKind,
        label: impl Into<String>,
        points: Vec<ErrorPoint<T>>,
        floor: T,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid);
        }
        let mut prev = 0u64;
        for p in &points {
            if p.n <= prev {
                return Err(Error::InvalidGrid);
            }
            if !p.abs_error.is_finite() || p.abs_error < T::zero() {
                return Err(Error::InvalidErrorValue);
            }
            prev = p.n;
        }
        Ok(Self {
            kind,
            label: label.into(),
            points,
            floor,
        })
    }

    pub fn kind(&self) -> EstimatorKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[ErrorPoint<T>] {
        &self.points
    }

    pub fn floor(&self) -> T {
        self.floor
    }

    /// Points at or above the saturation floor.
    pub fn unsaturated(&self) -> impl Iterator<Item = &ErrorPoint<T>> {
        self.points.iter().filter(move |p| p.abs_error >= self.floor)
    }

    pub fn any_saturated(&self) -> bool {
        self.points.iter().any(|p| p.abs_error < self.floor)
    }
}

/// Evaluates `estimate(n)` over the grid and records `|estimate - reference|`.
/// A failure at any grid point aborts with that `n` attached.
pub fn build_error_series<T: Real, F>(
    kind: EstimatorKind,
    label: impl Into<String>,
    grid: &[u64],
    reference: T,
    floor: T,
    mut estimate: F,
) -> Result<ErrorSeries<T>>
where
    F: FnMut(u64) -> Result<T>,
{
    if !reference.is_finite() {
        return Err(Error::NonFiniteReference);
    }
    let mut points = Vec::with_capacity(grid.len());
    for &n in grid {
        let value = estimate(n).map_err(|e| Error::EstimateAt {
            n,
            source: Box::new(e),
        })?;
        points.push(ErrorPoint {
            n,
            abs_error: (value - reference).abs(),
        });
    }
    ErrorSeries::from_points(kind, label, points, floor)
}

/// Least-squares slope of `log(abs_error)` against `log(n)` over unsaturated
/// points inside `[n_lo, n_hi]`.
pub fn fit_slope<T: Real>(series: &ErrorSeries<T>, window: (u64, u64)) -> Result<T> {
    let (n_lo, n_hi) = window;
    let pts: Vec<&ErrorPoint<T>> = series
        .unsaturated()
        .filter(|p| p.n >= n_lo && p.n <= n_hi)
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints {
            n_lo,
            n_hi,
            have: pts.len(),
            need: MIN_FIT_POINTS,
        });
    }
    let count = from_index::<T>(pts.len() as u64);
    let mut mean_x = T::zero();
    let mut mean_y = T::zero();
    for p in &pts {
        mean_x += from_index::<T>(p.n).ln();
        mean_y += p.abs_error.ln();
    }
    mean_x = mean_x / count;
    mean_y = mean_y / count;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for p in &pts {
        let dx = from_index::<T>(p.n).ln() - mean_x;
        let dy = p.abs_error.ln() - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
    }
    Ok(sxy / sxx)
}

/// `(n, n^exponent * abs_error)` over the unsaturated points. An entirely
/// saturated series yields an empty vector.
pub fn scaled_error<T: Real>(series: &ErrorSeries<T>, exponent: T) -> Result<Vec<(u64, T)>> {
    if exponent.is_nan() || exponent <= T::zero() {
        return Err(Error::NonPositiveScaling {
            value: exponent.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(series
        .unsaturated()
        .map(|p| (p.n, from_index::<T>(p.n).powf(exponent) * p.abs_error))
        .collect())
}

/// Fitted rate, plateau diagnostics and saturation flag for one error curve.
#[derive(Clone, Debug)]
pub struct RateReport<T> {
    /// Least-squares log-log slope over the fit window.
    pub fitted_slope: T,
    /// `-min(2p-2, q-1)` for the pair under test.
    pub theoretical_exponent: T,
    /// Window the slope and plateau were measured on.
    pub fit_window: (u64, u64),
    /// Median of `n^rate * error` over the window, present when the spread
    /// qualifies as a plateau.
    pub plateau_constant: Option<T>,
    /// `(max - min) / median` of the scaled errors over the window.
    pub plateau_stability: T,
    /// Whether any grid point fell below the saturation floor.
    pub saturation_floor_detected: bool,
}

impl<T: Real> RateReport<T> {
    pub fn is_plateau(&self) -> bool {
        self.plateau_constant.is_some()
    }
}

fn median<T: Real>(values: &mut [T]) -> T {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) * lit::<T>(0.5)
    }
}

/// Default fit window: the last decade `[n_hi / 10, n_hi]` of points whose
/// error clears `fit_guard * floor`, so the fit never leans on
/// quantization-dominated points next to the floor.
fn default_window<T: Real>(
    series: &ErrorSeries<T>,
    options: &AnalysisOptions<T>,
) -> Result<(u64, u64)> {
    let guard_level = options.saturation_floor * options.fit_guard;
    let n_hi = series
        .points()
        .iter()
        .filter(|p| p.abs_error >= guard_level)
        .map(|p| p.n)
        .max()
        .ok_or_else(|| {
            if series.unsaturated().next().is_none() {
                Error::FullySaturated
            } else {
                Error::WindowTooNarrow
            }
        })?;
    let n_lo = (n_hi / 10).max(1);
    let first = series.points().first().expect("nonempty").n;
    if n_lo < first && first * 10 > n_hi {
        return Err(Error::WindowTooNarrow);
    }
    Ok((n_lo.max(first), n_hi))
}

/// Slope fit plus plateau analysis at the pair's theoretical exponent, over
/// the default guarded window.
pub fn verify_rate<T: Real>(
    series: &ErrorSeries<T>,
    pair: &ExponentPair<T>,
    options: &AnalysisOptions<T>,
) -> Result<RateReport<T>> {
    let window = default_window(series, options)?;
    verify_rate_in_window(series, pair, options, window)
}

/// Same as [`verify_rate`] with an explicit window override.
pub fn verify_rate_in_window<T: Real>(
    series: &ErrorSeries<T>,
    pair: &ExponentPair<T>,
    options: &AnalysisOptions<T>,
    window: (u64, u64),
) -> Result<RateReport<T>> {
    let rate = predicted_rate(pair);
    let fitted_slope = fit_slope(series, window)?;
    let mut scaled: Vec<T> = series
        .unsaturated()
        .filter(|p| p.n >= window.0 && p.n <= window.1)
        .map(|p| from_index::<T>(p.n).powf(rate) * p.abs_error)
        .collect();
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for &v in &scaled {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let med = median(&mut scaled);
    let plateau_stability = (hi - lo) / med;
    let plateau_constant = (plateau_stability <= options.plateau_max_spread).then_some(med);
    Ok(RateReport {
        fitted_slope,
        theoretical_exponent: -rate,
        fit_window: window,
        plateau_constant,
        plateau_stability,
        saturation_floor_detected: series.any_saturated(),
    })
}

/// Median error per decade of `n`, in decade order. A robust summary for
/// trend checks on noisy curves.
pub fn decade_medians<T: Real>(points: &[(u64, T)]) -> Vec<T> {
    let mut out = Vec::new();
    let mut bucket: Vec<T> = Vec::new();
    let mut current = None;
    for &(n, v) in points {
        let decade = (n as f64).log10().floor() as i32;
        if current != Some(decade) {
            if !bucket.is_empty() {
                out.push(median(&mut bucket));
                bucket.clear();
            }
            current = Some(decade);
        }
        bucket.push(v);
    }
    if !bucket.is_empty() {
        out.push(median(&mut bucket));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deficiency::ExponentPair;
    use crate::series::{euler_maclaurin_zeta, partial_sum, reference_zeta, Exponent};

    fn synthetic(kind_exp: f64, constant: f64, grid: &[u64]) -> ErrorSeries<f64> {
        let points = grid
            .iter()
            .map(|&n| ErrorPoint {
                n,
                abs_error: constant * (n as f64).powf(-kind_exp),
            })
            .collect();
        ErrorSeries::from_points(
            EstimatorKind::DeficiencyB,
            "synthetic",
            points,
            DEFAULT_SATURATION_FLOOR,
        )
        .unwrap()
    }

    #[test]
    fn grid_is_increasing_and_spans_endpoints() {
        let g = geometric_grid(1, 5000, 40);
        assert_eq!(*g.first().unwrap(), 1);
        assert_eq!(*g.last().unwrap(), 5000);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(geometric_grid(1, 1, 40), vec![1]);
    }

    #[test]
    fn slope_recovers_exact_power_laws() {
        let grid = geometric_grid(10, 10_000, 40);
        let s = synthetic(2.0, 1.0, &grid);
        let slope = fit_slope(&s, (10, 10_000)).unwrap();
        assert!((slope + 2.0).abs() < 1e-12);

        let s = synthetic(4.0, 3.0, &grid);
        let slope = fit_slope(&s, (10, 10_000)).unwrap();
        assert!((slope + 4.0).abs() < 1e-12);
    }

    #[test]
    fn slope_invariant_under_positive_scaling() {
        let grid = geometric_grid(10, 10_000, 40);
        let a = synthetic(2.5, 1.0, &grid);
        let b = synthetic(2.5, std::f64::consts::PI, &grid);
        let sa = fit_slope(&a, (10, 10_000)).unwrap();
        let sb = fit_slope(&b, (10, 10_000)).unwrap();
        assert!((sa - sb).abs() < 1e-12);
    }

    #[test]
    fn slope_requires_enough_points() {
        let s = synthetic(2.0, 1.0, &[10, 20, 30, 40]);
        assert!(matches!(
            fit_slope(&s, (10, 40)),
            Err(Error::InsufficientPoints { have: 4, .. })
        ));
    }

    #[test]
    fn saturated_points_never_enter_fits() {
        let grid = geometric_grid(10, 10_000, 10);
        let mut points: Vec<ErrorPoint<f64>> = grid
            .iter()
            .map(|&n| ErrorPoint {
                n,
                abs_error: (n as f64).powf(-2.0),
            })
            .collect();
        for p in points.iter_mut().filter(|p| p.n > 1000) {
            p.abs_error = 1e-17;
        }
        let s = ErrorSeries::from_points(EstimatorKind::Truncation, "sat", points, 1e-16).unwrap();
        let slope = fit_slope(&s, (10, 10_000)).unwrap();
        assert!((slope + 2.0).abs() < 1e-9);
        assert!(s.any_saturated());
    }

    #[test]
    fn fully_saturated_series_is_a_diagnostic() {
        let points = vec![
            ErrorPoint { n: 10, abs_error: 1e-17 },
            ErrorPoint { n: 100, abs_error: 0.0 },
            ErrorPoint { n: 1000, abs_error: 1e-18 },
        ];
        let s = ErrorSeries::from_points(EstimatorKind::DeficiencyB, "flat", points, 1e-16).unwrap();
        let pair = ExponentPair::from_values(2.0, 3.0).unwrap();
        assert_eq!(
            verify_rate(&s, &pair, &AnalysisOptions::default()).unwrap_err(),
            Error::FullySaturated
        );
        assert_eq!(scaled_error(&s, 2.0).unwrap(), vec![]);
    }

    #[test]
    fn scaled_error_of_exact_law_is_constant() {
        let grid = geometric_grid(10, 1000, 10);
        let s = synthetic(4.0, 0.7, &grid);
        let scaled = scaled_error(&s, 4.0).unwrap();
        for (_, v) in scaled {
            assert!((v - 0.7).abs() < 1e-12);
        }
        assert!(scaled_error(&s, 0.0).is_err());
    }

    #[test]
    fn verify_rate_on_synthetic_law() {
        let grid = geometric_grid(10, 10_000, 40);
        let s = synthetic(2.0, 1.0, &grid);
        let pair = ExponentPair::from_values(2.0, 3.0).unwrap();
        let report = verify_rate(&s, &pair, &AnalysisOptions::default()).unwrap();
        assert!((report.fitted_slope + 2.0).abs() < 1e-12);
        assert_eq!(report.theoretical_exponent, -2.0);
        assert!(report.is_plateau());
        assert!((report.plateau_constant.unwrap() - 1.0).abs() < 1e-12);
        assert!(report.plateau_stability < 1e-12);
        assert!(!report.saturation_floor_detected);
    }

    #[test]
    fn truncation_slope_matches_tail_law() {
        // q = 3 truncation errors decay like n^{-2}; harness self-test
        let q = Exponent::new(3.0f64).unwrap();
        let reference = reference_zeta(q);
        let grid = geometric_grid(1, 5000, 40);
        let series = build_error_series(
            EstimatorKind::Truncation,
            "trunc q=3",
            &grid,
            reference,
            lit(DEFAULT_SATURATION_FLOOR),
            |n| partial_sum(q, n),
        )
        .unwrap();
        let slope = fit_slope(&series, (500, 5000)).unwrap();
        assert!((slope + 2.0).abs() <= 0.1, "slope={slope}");
    }

    #[test]
    fn truncation_errors_match_brute_tail() {
        let q = Exponent::new(3.0f64).unwrap();
        let reference = reference_zeta(q);
        let series = build_error_series(
            EstimatorKind::Truncation,
            "trunc",
            &[10, 100],
            reference,
            lit(DEFAULT_SATURATION_FLOOR),
            |n| partial_sum(q, n),
        )
        .unwrap();
        // brute-force tails, summed smallest first
        let tail = |n: u64| -> f64 {
            let mut acc = 0.0;
            for k in (n + 1..=10_000_000u64).rev() {
                acc += (k as f64).powf(-3.0);
            }
            acc
        };
        assert!((series.points()[0].abs_error - tail(10)).abs() < 1e-10);
        assert!((series.points()[1].abs_error - tail(100)).abs() < 1e-12);
    }

    #[test]
    fn euler_maclaurin_error_is_tiny_at_m2() {
        let q = Exponent::new(3.0f64).unwrap();
        let reference = reference_zeta(q);
        let series = build_error_series(
            EstimatorKind::EulerMaclaurin(2),
            "em2",
            &[100],
            reference,
            lit(DEFAULT_SATURATION_FLOOR),
            |n| euler_maclaurin_zeta(q, n, 2),
        )
        .unwrap();
        assert!(series.points()[0].abs_error <= 1e-10);
    }

    #[test]
    fn build_error_series_reports_offending_n() {
        let q = Exponent::new(3.0f64).unwrap();
        let err = build_error_series(
            EstimatorKind::EulerMaclaurin(2),
            "em2",
            &[1, 10],
            1.2,
            lit(DEFAULT_SATURATION_FLOOR),
            |n| euler_maclaurin_zeta(q, n, 2),
        )
        .unwrap_err();
        assert!(matches!(err, Error::EstimateAt { n: 1, .. }));
    }

    #[test]
    fn decade_medians_are_ordered_by_decade() {
        let pts: Vec<(u64, f64)> = vec![(10, 3.0), (20, 1.0), (99, 2.0), (100, 0.5), (400, 0.1)];
        let med = decade_medians(&pts);
        assert_eq!(med, vec![2.0, 0.3]);
    }

    #[test]
    fn report_window_spans_a_decade() {
        let grid = geometric_grid(1, 5000, 40);
        let s = synthetic(2.0, 1.0, &grid);
        let pair = ExponentPair::from_values(2.0, 3.0).unwrap();
        let report = verify_rate(&s, &pair, &AnalysisOptions::default()).unwrap();
        assert_eq!(report.fit_window, (500, 5000));
        assert!(report.fit_window.1 / report.fit_window.0 >= 10);
    }
}
