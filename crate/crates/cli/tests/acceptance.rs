//! Acceptance suite. Each test prints one pass/fail line with the measured
//! quantity, then asserts. Run with `cargo test --test acceptance --
//! --nocapture` to see every line.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zeta_deficiency::analysis::{
    decade_medians, fit_slope, scaled_error, verify_rate, AnalysisOptions, ErrorSeries,
};
use zeta_deficiency::deficiency::{
    balancing_threshold, deficiency_direct, deficiency_incremental, estimate, predicted_rate,
    EstimatorContext, EstimatorKind, ExponentPair,
};
use zeta_deficiency::scalar::power_ratio;
use zeta_deficiency::series::{
    even_zeta_closed_form, euler_maclaurin_zeta, reference_zeta, tail_leading, Exponent,
    SeriesTable,
};
use zeta_deficiency::spectral::spectral_threshold;
use zetadef::experiments;
use zetadef::output::format_value;
use zetadef::run::{run_spectral, run_sweep};
use zetadef::Settings;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "[acceptance] criterion {id} ({name}): {} -- {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} ({name}): {detail}");
}

fn exp64(v: f64) -> Exponent<f64> {
    Exponent::new(v).unwrap()
}

fn series_from_column(table: &zetadef::Table, label: &str, floor: f64) -> ErrorSeries<f64> {
    let col = table.column(label).unwrap_or_else(|| panic!("column {label}"));
    let points = table
        .grid
        .iter()
        .zip(col)
        .map(|(&n, &abs_error)| zeta_deficiency::analysis::ErrorPoint { n, abs_error })
        .collect();
    ErrorSeries::from_points(EstimatorKind::DeficiencyB, label, points, floor).unwrap()
}

/// Criterion 1: fitted slope of |B_n^{(2,3)} - zeta(3)| over n in [500, 5000]
/// equals -2.0 within 0.1, in under 10 seconds.
#[test]
fn criterion_1_rate_law_zeta3() {
    let start = Instant::now();
    let settings = Settings::default();
    let table = experiments::experiment_i(&settings, 5000).unwrap();
    let series = series_from_column(&table, "b_p2", settings.floor);
    let slope = fit_slope(&series, (500, 5000)).unwrap();
    let elapsed = start.elapsed();
    let pass = (slope + 2.0).abs() <= 0.1 && elapsed.as_secs_f64() < 10.0;
    report(
        1,
        "rate law zeta(3)",
        pass,
        &format!("slope={slope:.4} target=-2.0+/-0.1 runtime={elapsed:.2?}"),
    );
}

/// Criterion 2: for zeta(5), slopes of B with p=2 and p=4 over the last
/// unsaturated decade equal -2.0 +/- 0.15 and -4.0 +/- 0.2, in under 10 s.
#[test]
fn criterion_2_rate_law_zeta5() {
    let start = Instant::now();
    let settings = Settings::default();
    let options = AnalysisOptions::default();
    let table = experiments::experiment_ii(&settings, 5000).unwrap();

    let universal = series_from_column(&table, "b_p2", settings.floor);
    let pair2 = ExponentPair::from_values(2.0, 5.0).unwrap();
    let slope2 = verify_rate(&universal, &pair2, &options).unwrap().fitted_slope;

    let optimized = series_from_column(&table, "b_p4", settings.floor);
    let pair4 = ExponentPair::from_values(4.0, 5.0).unwrap();
    let report4 = verify_rate(&optimized, &pair4, &options).unwrap();
    let slope4 = report4.fitted_slope;

    let elapsed = start.elapsed();
    let pass =
        (slope2 + 2.0).abs() <= 0.15 && (slope4 + 4.0).abs() <= 0.2 && elapsed.as_secs_f64() < 10.0;
    report(
        2,
        "rate law zeta(5)",
        pass,
        &format!(
            "slope_p2={slope2:.4} (target -2.0+/-0.15), slope_p4={slope4:.4} (target -4.0+/-0.2, window {:?}), runtime={elapsed:.2?}",
            report4.fit_window
        ),
    );
}

/// Criterion 3: the scaled series n^4 |B_n^{(4,5)} - zeta(5)| has relative
/// spread (max - min) / median at most 0.2 over n in [500, 5000].
///
/// Known red. True errors on the top half-decade of this window are 2 to 5
/// ulp of zeta(5), so any binary64 measurement of them is quantized to the
/// ulp grid and the spread bound cannot hold over this window in double
/// precision. The check is kept at its nominal window and threshold; the
/// spread over [500, 2500], where quantization is negligible, is printed
/// alongside.
#[test]
fn criterion_3_plateau_zeta5() {
    let settings = Settings::default();
    let outcome = experiments::experiment_iii(&settings, 5000).unwrap();
    let scaled = scaled_error(&outcome.series, 4.0).unwrap();
    let spread_over = |lo: u64, hi: u64| -> f64 {
        let mut values: Vec<f64> = scaled
            .iter()
            .filter(|&&(n, _)| n >= lo && n <= hi)
            .map(|&(_, v)| v)
            .collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = values[values.len() / 2];
        (values.last().unwrap() - values.first().unwrap()) / median
    };
    let spread = spread_over(500, 5000);
    let clean_spread = spread_over(500, 2500);
    let pass = spread <= 0.2;
    report(
        3,
        "plateau zeta(5)",
        pass,
        &format!(
            "spread[500,5000]={spread:.4} (target <=0.2); spread[500,2500]={clean_spread:.4}; \
             errors at n>4000 are 2-5 ulp of zeta(5), so the measured tail is ulp-quantized"
        ),
    );
}

/// Criterion 4: slope of |B_n^{(6,7)} - zeta(7)| equals -6.0 +/- 0.3 on the
/// pre-saturation window, and the saturation flag triggers at the 1e-16
/// floor.
#[test]
fn criterion_4_rate_law_and_saturation_zeta7() {
    let settings = Settings::default();
    let outcome = experiments::experiment_v(&settings, 5000).unwrap();
    let slope = outcome.report.fitted_slope;
    let saturated = outcome.report.saturation_floor_detected;
    let pass = (slope + 6.0).abs() <= 0.3 && saturated;
    report(
        4,
        "rate law + saturation zeta(7)",
        pass,
        &format!(
            "slope={slope:.4} (target -6.0+/-0.3, window {:?}), saturation_flag={saturated}",
            outcome.report.fit_window
        ),
    );
}

/// Criterion 5: |A_N - zeta(q)| <= 2 (q/p) zeta(p)^{q/p-1} tail_leading(p, N)
/// at N = 1e5 for (p, q) in {(2,3), (2,4), (4,5)}.
#[test]
fn criterion_5_exact_identity_bound() {
    const N: u64 = 100_000;
    let mut detail = String::new();
    let mut pass = true;
    for (p, q) in [(2.0, 3.0), (2.0, 4.0), (4.0, 5.0)] {
        let pair = ExponentPair::from_values(p, q).unwrap();
        let base = SeriesTable::build(exp64(p), N).unwrap();
        let target = SeriesTable::build(exp64(q), N).unwrap();
        let ctx = EstimatorContext::new(pair, &base, &target).unwrap();
        let a_n = estimate(EstimatorKind::DeficiencyA, &ctx, N).unwrap();
        let err = (a_n - reference_zeta(exp64(q))).abs();
        let bound = 2.0
            * pair.alpha_ratio()
            * reference_zeta(exp64(p)).powf(pair.alpha_ratio() - 1.0)
            * tail_leading(exp64(p), N).unwrap();
        pass &= err <= bound;
        detail.push_str(&format!("({p},{q}): err={err:.3e} bound={bound:.3e}; "));
    }
    report(5, "exact identity at the limit", pass, &detail);
}

/// Criterion 6: over 100 seeded random pairs, increments are nonnegative,
/// D_n is nondecreasing, direct and incremental evaluation agree, and
/// T_n <= (S_n)^{q/p} <= zeta(p)^{q/p}.
#[test]
fn criterion_6_deficiency_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut pass = true;
    let mut worst_rel: f64 = 0.0;
    for _ in 0..100 {
        let p: f64 = rng.gen_range(1.2..8.0);
        let q: f64 = p + rng.gen_range(0.5..8.0);
        let pair = ExponentPair::from_values(p, q).unwrap();
        let base = SeriesTable::build(exp64(p), 1000).unwrap();
        let target = SeriesTable::build(exp64(q), 1000).unwrap();
        let series = deficiency_incremental(&pair, &base, 1000).unwrap();

        let mut prev = 0.0f64;
        for &v in series.values() {
            // fold jitter scales with the running value
            let slack = 1e-15 + 4.0 * f64::EPSILON * v.abs();
            if v < prev - slack {
                pass = false;
            }
            prev = v;
        }

        let zp_pow = power_ratio(reference_zeta(exp64(p)), pair.alpha_ratio());
        for n in [10u64, 100, 1000] {
            let direct = deficiency_direct(&pair, &base, &target, n).unwrap();
            let inc = series.value_at(n).unwrap();
            let diff = (direct - inc).abs();
            let tol = (1e-12 * direct.abs()).max(1e-15);
            if diff > tol {
                pass = false;
            }
            if direct != 0.0 {
                worst_rel = worst_rel.max(diff / direct.abs());
            }
            let s_pow = power_ratio(base.partial(n).unwrap(), pair.alpha_ratio());
            let t_n = target.partial(n).unwrap();
            if t_n > s_pow * (1.0 + 1e-13) || s_pow > zp_pow * (1.0 + 1e-13) {
                pass = false;
            }
        }
    }
    report(
        6,
        "deficiency invariants (100 random pairs)",
        pass,
        &format!("worst direct/incremental relative gap = {worst_rel:.3e}"),
    );
}

/// Criterion 7: the Euler-Maclaurin oracle matches Euler's closed form at
/// even orders to 1e-13 relative, and truncation-error slopes reproduce the
/// -(q-1) tail law within 0.1.
#[test]
fn criterion_7_oracle_integrity() {
    let settings = Settings::default();
    let options = AnalysisOptions::default();
    let mut pass = true;
    let mut detail = String::new();
    for m in 1..=4u32 {
        let em = euler_maclaurin_zeta(exp64(2.0 * f64::from(m)), 10_000, 6).unwrap();
        let closed = even_zeta_closed_form::<f64>(m).unwrap();
        let rel = ((em - closed) / closed).abs();
        pass &= rel <= 1e-13;
        detail.push_str(&format!("m={m}: rel={rel:.2e}; "));
    }
    for q in [3.0f64, 5.0, 7.0] {
        let table = run_sweep(q, Some(2.0), None, "trunc", 5000, &settings).unwrap();
        let series = series_from_column(&table, "trunc", settings.floor);
        let pair = ExponentPair::from_values(2.0, q).unwrap();
        let fitted = verify_rate(&series, &pair, &options).unwrap().fitted_slope;
        let target = -(q - 1.0);
        pass &= (fitted - target).abs() <= 0.1;
        detail.push_str(&format!("trunc q={q}: slope={fitted:.3} (target {target}); "));
    }
    report(7, "oracle integrity", pass, &detail);
}

/// Criterion 8: the alpha=1 spectral path reproduces the classical error
/// column byte for byte, and alpha=2 spectral errors against zeta(6)
/// decrease over decade medians on [100, 1000].
#[test]
fn criterion_8_spectral_reduction_and_oracle() {
    let settings = Settings::default();

    let classical = run_sweep(3.0, Some(2.0), None, "b", 1000, &settings).unwrap();
    let source = zeta_deficiency::spectral::SpectrumSource::power_law(1.0).unwrap();
    let spectral = run_spectral(source, 2.0, 3.0, Some(1000), &settings).unwrap();
    let classical_col = classical.column("b_p2").unwrap();
    let spectral_col = spectral.column("b").unwrap();
    let byte_identical = classical.grid == spectral.grid
        && classical_col.len() == spectral_col.len()
        && classical_col
            .iter()
            .zip(spectral_col)
            .all(|(a, b)| format_value(*a) == format_value(*b) && a.to_bits() == b.to_bits());

    let vi = experiments::experiment_vi(&settings, 1000).unwrap();
    let alpha2 = vi.column("alpha2").unwrap();
    let points: Vec<(u64, f64)> = vi
        .grid
        .iter()
        .zip(alpha2)
        .filter(|(&n, _)| (100..=1000).contains(&n))
        .map(|(&n, &e)| (n, e))
        .collect();
    let medians = decade_medians(&points);
    let decreasing = medians.windows(2).all(|w| w[1] < w[0]);

    let pass = byte_identical && decreasing;
    report(
        8,
        "spectral reduction + oracle",
        pass,
        &format!("alpha=1 byte-identical={byte_identical}; alpha=2 decade medians={medians:?}"),
    );
}

/// Criterion 9: threshold functions and predicted rates take their exact
/// values.
#[test]
fn criterion_9_threshold_functions() {
    let mut pass = balancing_threshold(exp64(3.0)).unwrap() == 2.0;
    for q in [3.0f64, 5.0, 7.0] {
        pass &= spectral_threshold(1.0, exp64(q)).unwrap()
            == balancing_threshold(exp64(q)).unwrap();
    }
    let rates: Vec<f64> = [(2.0, 3.0), (4.0, 5.0), (6.0, 7.0)]
        .iter()
        .map(|&(p, q)| predicted_rate(&ExponentPair::from_values(p, q).unwrap()))
        .collect();
    pass &= rates == vec![2.0, 4.0, 6.0];
    report(
        9,
        "threshold functions",
        pass,
        &format!("p*(3)=2, spectral_threshold(1,q)=classical, rates={rates:?}"),
    );
}

/// Criterion 10: the odd-order sweep (q = 3..19, p = 2, n up to 5000) runs in
/// under 60 seconds with finite, nonnegative error columns whose decade
/// medians never increase.
#[test]
fn criterion_10_appendix_sweep() {
    let start = Instant::now();
    let settings = Settings::default();
    let table = experiments::experiment_appendix_f(&settings, 5000).unwrap();
    let elapsed = start.elapsed();

    let mut pass = elapsed.as_secs_f64() < 60.0;
    let mut q3_at_5000 = f64::NAN;
    for (label, column) in table.labels.iter().zip(&table.columns) {
        if !column.iter().all(|e| e.is_finite() && *e >= 0.0) {
            pass = false;
        }
        let points: Vec<(u64, f64)> = table.grid.iter().zip(column).map(|(&n, &e)| (n, e)).collect();
        let medians = decade_medians(&points);
        if !medians.windows(2).all(|w| w[1] <= w[0]) {
            pass = false;
        }
        if label == "q3" {
            q3_at_5000 = *column.last().unwrap();
        }
    }
    pass &= q3_at_5000 <= 1e-5;
    report(
        10,
        "odd-order sweep",
        pass,
        &format!(
            "runtime={elapsed:.2?} (limit 60s), columns={}, q3 error at n=5000 = {q3_at_5000:.3e}",
            table.labels.len()
        ),
    );
}
