//! Command implementations and the preset experiment runners.

use std::path::Path;

use zeta_deficiency::analysis::{
    build_error_series, geometric_grid, scaled_error, verify_rate, verify_rate_in_window,
    AnalysisOptions,
};
use zeta_deficiency::deficiency::{
    balancing_threshold, deficiency_incremental, estimate, predicted_rate, recommended_base,
    BaseStrategy, EstimatorContext, EstimatorKind, ExponentPair,
};
use zeta_deficiency::scalar::power_ratio;
use zeta_deficiency::series::{
    euler_maclaurin_zeta, partial_sum, reference_zeta_with, Exponent, SeriesTable,
};
use zeta_deficiency::spectral::{spectral_estimator, spectral_partial_sum, SpectralPair, SpectrumSource};
use zeta_deficiency::{ErrorSeries64, Exponent64, RateReport64};

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::{format_value, render_rate_report, Table};

pub fn parse_estimator(token: &str) -> CliResult<EstimatorKind> {
    let t = token.trim();
    if let Some(m) = t.strip_prefix("em:") {
        let order: u32 = m.parse().map_err(|_| {
            CliError::Validation(format!("estimator `{t}`: correction order must be an integer"))
        })?;
        return Ok(EstimatorKind::EulerMaclaurin(order));
    }
    match t {
        "trunc" => Ok(EstimatorKind::Truncation),
        "a" => Ok(EstimatorKind::DeficiencyA),
        "b" => Ok(EstimatorKind::DeficiencyB),
        "b2" => Ok(EstimatorKind::DeficiencyB2),
        _ => Err(CliError::Validation(format!(
            "unknown estimator `{t}` (expected trunc, a, b, b2 or em:<M>)"
        ))),
    }
}

pub fn parse_estimator_list(list: &str) -> CliResult<Vec<EstimatorKind>> {
    let kinds: Vec<EstimatorKind> = list
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_estimator)
        .collect::<CliResult<_>>()?;
    if kinds.is_empty() {
        return Err(CliError::Validation(
            "at least one estimator is required".into(),
        ));
    }
    Ok(kinds)
}

pub fn parse_strategy(s: &str) -> CliResult<BaseStrategy> {
    match s {
        "universal" => Ok(BaseStrategy::Universal),
        "explicit-even" => Ok(BaseStrategy::ExplicitEven),
        _ => Err(CliError::Validation(format!(
            "unknown strategy `{s}` (expected universal or explicit-even)"
        ))),
    }
}

fn exponent(value: f64) -> CliResult<Exponent64> {
    Ok(Exponent::new(value)?)
}

fn reference(q: Exponent64, settings: &Settings) -> CliResult<f64> {
    Ok(reference_zeta_with(q, settings.ref_n, settings.ref_m)?)
}

fn analysis_options(settings: &Settings) -> AnalysisOptions<f64> {
    AnalysisOptions {
        saturation_floor: settings.floor,
        ..AnalysisOptions::default()
    }
}

/// Base exponent from an explicit value or a strategy; `universal` when
/// neither is given.
fn resolve_base(
    q: Exponent64,
    p: Option<f64>,
    strategy: Option<&str>,
) -> CliResult<Exponent64> {
    match (p, strategy) {
        (Some(v), _) => exponent(v),
        (None, Some(s)) => Ok(recommended_base(q, parse_strategy(s)?)?),
        (None, None) => Ok(recommended_base(q, BaseStrategy::Universal)?),
    }
}

fn label_for(kind: EstimatorKind, base: Option<Exponent64>) -> String {
    match (kind, base) {
        (EstimatorKind::EulerMaclaurin(m), _) => format!("em{m}"),
        (EstimatorKind::Truncation, _) => "trunc".to_string(),
        (k, Some(p)) => format!("{k}_p{}", p.value()),
        (k, None) => k.to_string(),
    }
}

/// One estimator over a grid of n values, as an error series against the
/// reference for zeta(q).
#[allow(clippy::too_many_arguments)]
fn error_series_for(
    kind: EstimatorKind,
    label: &str,
    q: Exponent64,
    ctx: Option<&EstimatorContext<'_, f64>>,
    target: &SeriesTable<f64>,
    grid: &[u64],
    reference_value: f64,
    settings: &Settings,
) -> CliResult<ErrorSeries64> {
    let series = build_error_series(
        kind,
        label,
        grid,
        reference_value,
        settings.floor,
        |n| match kind {
            EstimatorKind::Truncation => target.partial(n),
            EstimatorKind::EulerMaclaurin(m) => euler_maclaurin_zeta(q, n, m),
            _ => estimate(kind, ctx.expect("context exists for deficiency estimators"), n),
        },
    )?;
    Ok(series)
}

/// `estimate` command: one line with the estimate, the reference, the
/// absolute error, the predicted rate and the optimal-base diagnosis.
pub fn run_estimate(
    estimator: &str,
    p: Option<f64>,
    q: f64,
    n: u64,
    strategy: Option<&str>,
    settings: &Settings,
) -> CliResult<String> {
    let kind = parse_estimator(estimator)?;
    let q_exp = exponent(q)?;
    let reference_value = reference(q_exp, settings)?;

    let mut base_used: Option<Exponent64> = None;
    let value = match kind {
        EstimatorKind::Truncation => {
            if n == 0 {
                return Err(CliError::Validation("n must be at least 1".into()));
            }
            partial_sum(q_exp, n)?
        }
        EstimatorKind::EulerMaclaurin(m) => euler_maclaurin_zeta(q_exp, n, m)?,
        _ => {
            let base = resolve_base(q_exp, p, strategy)?;
            let pair = ExponentPair::new(base, q_exp)?;
            base_used = Some(base);
            let base_table = SeriesTable::build(base, n)?;
            let target_table = SeriesTable::build(q_exp, n)?;
            let zeta_base = reference(base, settings)?;
            let ctx = EstimatorContext::with_reference(pair, &base_table, &target_table, zeta_base)?;
            estimate(kind, &ctx, n)?
        }
    };

    let abs_error = (value - reference_value).abs();
    let rate = match (kind, base_used) {
        (EstimatorKind::Truncation, _) => format_value(q - 1.0),
        (EstimatorKind::EulerMaclaurin(_), _) => "-".to_string(),
        (_, Some(base)) => {
            let pair = ExponentPair::new(base, q_exp)?;
            format_value(predicted_rate(&pair))
        }
        _ => "-".to_string(),
    };
    let optimal = match base_used {
        Some(base) => match balancing_threshold(q_exp) {
            Ok(threshold) => {
                if base.value() >= threshold {
                    "yes"
                } else {
                    "no"
                }
            }
            Err(_) => "-",
        },
        None => "-",
    };

    let p_field = base_used
        .map(|b| format!(" p={}", b.value()))
        .unwrap_or_default();
    Ok(format!(
        "estimator={kind}{p_field} q={q} n={n} estimate={} reference={} abs_error={:e} predicted_rate={rate} optimal_base={optimal}",
        format_value(value),
        format_value(reference_value),
        abs_error,
    ))
}

/// `sweep` command: CSV of absolute errors, one column per estimator.
pub fn run_sweep(
    q: f64,
    p: Option<f64>,
    strategy: Option<&str>,
    estimators: &str,
    n_max: u64,
    settings: &Settings,
) -> CliResult<Table> {
    let kinds = parse_estimator_list(estimators)?;
    let q_exp = exponent(q)?;
    let needs_base = kinds.iter().any(|k| k.needs_base());
    let n_lo = kinds.iter().map(|k| k.min_n()).max().unwrap_or(1);
    if n_max < n_lo {
        return Err(CliError::Validation(format!(
            "n_max={n_max} is below the smallest admissible n ({n_lo}) for the requested estimators"
        )));
    }
    let grid = geometric_grid(n_lo, n_max, settings.per_decade);
    let reference_value = reference(q_exp, settings)?;
    let target = SeriesTable::build(q_exp, n_max)?;

    let base_bundle = if needs_base {
        let base = resolve_base(q_exp, p, strategy)?;
        let pair = ExponentPair::new(base, q_exp)?;
        let table = SeriesTable::build(base, n_max)?;
        let zeta_base = reference(base, settings)?;
        Some((base, pair, table, zeta_base))
    } else {
        None
    };

    let ctx = match &base_bundle {
        Some((_, pair, table, zeta_base)) => Some(EstimatorContext::with_reference(
            *pair, table, &target, *zeta_base,
        )?),
        None => None,
    };

    let mut labels = Vec::new();
    let mut columns = Vec::new();
    for kind in kinds {
        let base = base_bundle.as_ref().map(|(b, ..)| *b).filter(|_| kind.needs_base());
        let label = label_for(kind, base);
        let series = error_series_for(
            kind,
            &label,
            q_exp,
            ctx.as_ref(),
            &target,
            &grid,
            reference_value,
            settings,
        )?;
        columns.push(series.points().iter().map(|p| p.abs_error).collect());
        labels.push(label);
    }
    Ok(Table {
        grid,
        labels,
        columns,
    })
}

/// Everything the `rate` command produces.
pub struct RateOutcome {
    pub text: String,
    pub scaled: Table,
    pub report: RateReport64,
    pub series: ErrorSeries64,
}

/// `rate` command: fitted slope, plateau diagnostics and a scaled-error
/// table.
#[allow(clippy::too_many_arguments)]
pub fn run_rate(
    p: f64,
    q: f64,
    estimator: &str,
    n_max: u64,
    scaling_exponent: Option<f64>,
    window: Option<(u64, u64)>,
    settings: &Settings,
) -> CliResult<RateOutcome> {
    let kind = parse_estimator(estimator)?;
    let base = exponent(p)?;
    let q_exp = exponent(q)?;
    let pair = ExponentPair::new(base, q_exp)?;
    if n_max < kind.min_n() {
        return Err(CliError::Validation(format!(
            "n_max={n_max} is below the smallest admissible n for `{kind}`"
        )));
    }
    let grid = geometric_grid(kind.min_n(), n_max, settings.per_decade);
    let reference_value = reference(q_exp, settings)?;
    let target = SeriesTable::build(q_exp, n_max)?;
    let base_table = SeriesTable::build(base, n_max)?;
    let zeta_base = reference(base, settings)?;
    let ctx = EstimatorContext::with_reference(pair, &base_table, &target, zeta_base)?;
    let label = label_for(kind, kind.needs_base().then_some(base));
    let series = error_series_for(
        kind,
        &label,
        q_exp,
        Some(&ctx),
        &target,
        &grid,
        reference_value,
        settings,
    )?;

    let options = analysis_options(settings);
    let report = match window {
        Some(w) => verify_rate_in_window(&series, &pair, &options, w)?,
        None => verify_rate(&series, &pair, &options)?,
    };
    let scaling = scaling_exponent.unwrap_or_else(|| predicted_rate(&pair));
    let scaled_points = scaled_error(&series, scaling)?;
    let scaled = Table {
        grid: scaled_points.iter().map(|&(n, _)| n).collect(),
        labels: vec!["scaled".to_string()],
        columns: vec![scaled_points.iter().map(|&(_, v)| v).collect()],
    };
    let text = render_rate_report(&label, &report, scaling);
    Ok(RateOutcome {
        text,
        scaled,
        report,
        series,
    })
}

/// Reads and validates an eigenvalue file.
pub fn load_spectrum(path: &Path) -> CliResult<SpectrumSource<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read spectrum {}: {e}", path.display())))?;
    Ok(SpectrumSource::parse_text(&text)?)
}

/// `spectral` command: error column of the spectral corrected estimator
/// against the configuration's reference.
pub fn run_spectral(
    source: SpectrumSource<f64>,
    p: f64,
    q: f64,
    n_max: Option<u64>,
    settings: &Settings,
) -> CliResult<Table> {
    let p_exp = exponent(p)?;
    let q_exp = Exponent::new(q).map_err(|_| zeta_deficiency::Error::InvalidPair { p, q })?;
    let k_max = source.k_max();
    let pair = SpectralPair::new(source, p_exp, q_exp)?;

    // power laws get the classical oracle zeta(alpha s); explicit spectra use
    // their full-array sums and make no limit claims
    let (zeta_l_base, zeta_l_target) = match pair.source() {
        SpectrumSource::PowerLaw { alpha } => {
            let zp = reference(exponent(alpha * p)?, settings)?;
            let zq = reference(exponent(alpha * q)?, settings)?;
            (zp, zq)
        }
        SpectrumSource::Explicit { .. } => {
            let k = k_max.expect("explicit spectra are finite");
            let zp = spectral_partial_sum(pair.source(), p, k)?;
            let zq = spectral_partial_sum(pair.source(), q, k)?;
            (zp, zq)
        }
    };

    let n_hi = match n_max {
        Some(n) => n,
        None => k_max.unwrap_or(1000),
    };
    if let Some(k) = k_max {
        if n_hi > k {
            return Err(CliError::Validation(
                zeta_deficiency::Error::SpectrumExhausted { n: n_hi, k_max: k }.to_string(),
            ));
        }
    }
    if n_hi == 0 {
        return Err(CliError::Validation("n_max must be at least 1".into()));
    }
    let grid = geometric_grid(1, n_hi, settings.per_decade);
    let series = build_error_series(
        EstimatorKind::DeficiencyB,
        "b",
        &grid,
        zeta_l_target,
        settings.floor,
        |n| spectral_estimator(&pair, n, zeta_l_base),
    )?;
    Ok(Table {
        grid,
        labels: vec!["b".to_string()],
        columns: vec![series.points().iter().map(|p| p.abs_error).collect()],
    })
}

/// Experiment presets. The pair choices are fixed; grid resolution follows
/// the settings, with `n_max` overridable.
pub mod experiments {
    use super::*;

    pub const DEFAULT_N_MAX: u64 = 5000;
    pub const SPECTRAL_N_MAX: u64 = 1000;

    /// Target zeta(3): truncation, both deficiency estimators at p=2 and the
    /// Euler-Maclaurin baseline with two corrections.
    pub fn experiment_i(settings: &Settings, n_max: u64) -> CliResult<Table> {
        run_sweep(3.0, Some(2.0), None, "trunc,a,b,em:2", n_max, settings)
    }

    /// Target zeta(5): the universal base p=2 against the optimized p=4.
    pub fn experiment_ii(settings: &Settings, n_max: u64) -> CliResult<Table> {
        let universal = run_sweep(5.0, Some(2.0), None, "b", n_max, settings)?;
        let optimized = run_sweep(5.0, Some(4.0), None, "b", n_max, settings)?;
        Ok(Table {
            grid: universal.grid,
            labels: vec!["b_p2".into(), "b_p4".into()],
            columns: vec![
                universal.columns.into_iter().next().unwrap(),
                optimized.columns.into_iter().next().unwrap(),
            ],
        })
    }

    /// Scaled-error plateau check for zeta(5) at p=4, exponent 4.
    pub fn experiment_iii(settings: &Settings, n_max: u64) -> CliResult<RateOutcome> {
        run_rate(4.0, 5.0, "b", n_max, Some(4.0), None, settings)
    }

    /// Target zeta(7): truncation, universal base and the optimized p=6.
    pub fn experiment_iv(settings: &Settings, n_max: u64) -> CliResult<Table> {
        let base = run_sweep(7.0, Some(2.0), None, "trunc,b", n_max, settings)?;
        let optimized = run_sweep(7.0, Some(6.0), None, "b", n_max, settings)?;
        let mut columns = base.columns;
        columns.push(optimized.columns.into_iter().next().unwrap());
        Ok(Table {
            grid: base.grid,
            labels: vec!["trunc".into(), "b_p2".into(), "b_p6".into()],
            columns,
        })
    }

    /// Scaled-error plateau check for zeta(7) at p=6, exponent 6.
    pub fn experiment_v(settings: &Settings, n_max: u64) -> CliResult<RateOutcome> {
        run_rate(6.0, 7.0, "b", n_max, Some(6.0), None, settings)
    }

    /// Power-law spectra `lambda_k = k^alpha` for alpha in {2, 3, 4}, all at
    /// p=2, q=3, against the oracle `zeta_L(s) = zeta(alpha s)`.
    pub fn experiment_vi(settings: &Settings, n_max: u64) -> CliResult<Table> {
        let mut labels = Vec::new();
        let mut columns = Vec::new();
        let mut grid = Vec::new();
        for alpha in [2.0f64, 3.0, 4.0] {
            let source = SpectrumSource::power_law(alpha)?;
            let table = run_spectral(source, 2.0, 3.0, Some(n_max), settings)?;
            grid = table.grid;
            labels.push(format!("alpha{alpha}"));
            columns.push(table.columns.into_iter().next().unwrap());
        }
        Ok(Table {
            grid,
            labels,
            columns,
        })
    }

    /// Odd-order sweep q = 3, 5, ..., 19 with base p = 2 and the corrected
    /// estimator assembled from the incremental deficiency recurrence, at
    /// every n up to n_max.
    pub fn experiment_appendix_f(settings: &Settings, n_max: u64) -> CliResult<Table> {
        let base = exponent(2.0)?;
        let base_table = SeriesTable::build(base, n_max)?;
        let zeta_base = reference(base, settings)?;
        let grid: Vec<u64> = (1..=n_max).collect();
        let mut labels = Vec::new();
        let mut columns = Vec::new();
        for q in (3..=19u32).step_by(2) {
            let q_exp = exponent(f64::from(q))?;
            let pair = ExponentPair::new(base, q_exp)?;
            let reference_value = reference(q_exp, settings)?;
            let series = deficiency_incremental(&pair, &base_table, n_max)?;
            let ratio = pair.alpha_ratio();
            let zeta_pow = power_ratio(zeta_base, ratio);
            let coeff = ratio * power_ratio(zeta_base, ratio - 1.0);
            let prefix = base_table.prefix();
            let column: Vec<f64> = series
                .values()
                .iter()
                .zip(prefix)
                .map(|(&d_n, &s_n)| {
                    let b_n = zeta_pow - d_n - coeff * (zeta_base - s_n);
                    (b_n - reference_value).abs()
                })
                .collect();
            labels.push(format!("q{q}"));
            columns.push(column);
        }
        Ok(Table {
            grid,
            labels,
            columns,
        })
    }
}
