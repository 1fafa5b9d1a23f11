use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use zetadef::config::{ConfigFile, Settings};
use zetadef::error::{CliError, CliResult};
use zetadef::run::{self, experiments};

#[derive(Parser)]
#[command(
    name = "zetadef",
    version,
    about = "Deficiency-based approximation of Riemann and spectral zeta values"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Common {
    /// Base exponent p
    #[arg(long)]
    p: Option<f64>,
    /// Target exponent q
    #[arg(long)]
    q: Option<f64>,
    /// Evaluation point for `estimate`
    #[arg(long)]
    n: Option<u64>,
    /// Largest n of a sweep grid
    #[arg(long = "n-max")]
    n_max: Option<u64>,
    /// Single estimator (estimate, rate): trunc | a | b | b2 | em:<M>
    #[arg(long)]
    estimator: Option<String>,
    /// Comma list of estimators for `sweep`
    #[arg(long)]
    estimators: Option<String>,
    /// Base selection when --p is absent: universal | explicit-even
    #[arg(long)]
    strategy: Option<String>,
    /// Power-law spectrum growth exponent
    #[arg(long)]
    alpha: Option<f64>,
    /// Eigenvalue file (one positive decimal per line, nondecreasing)
    #[arg(long)]
    spectrum: Option<PathBuf>,
    /// Output CSV path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Config file with `key = value` lines; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Reference evaluator partial-sum length
    #[arg(long = "ref-n")]
    ref_n: Option<u64>,
    /// Reference evaluator correction order
    #[arg(long = "ref-m")]
    ref_m: Option<u32>,
    /// Absolute error level treated as saturated
    #[arg(long = "saturation-floor")]
    saturation_floor: Option<f64>,
    /// Explicit fit window start
    #[arg(long = "fit-lo")]
    fit_lo: Option<u64>,
    /// Explicit fit window end
    #[arg(long = "fit-hi")]
    fit_hi: Option<u64>,
    /// Grid points per decade
    #[arg(long = "per-decade")]
    per_decade: Option<u32>,
    /// Scaling exponent for `rate` output
    #[arg(long)]
    exponent: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one estimator at a single n, with diagnostics
    Estimate(Common),
    /// Absolute-error curves for several estimators, as CSV
    Sweep(Common),
    /// Fit the convergence rate and emit scaled errors
    Rate(Common),
    /// Error curve for a spectral zeta configuration, as CSV
    Spectral(Common),
    /// Preset reproductions: I..VI or appendix-f
    Experiment {
        /// One of I, II, III, IV, V, VI, appendix-f
        id: String,
        #[command(flatten)]
        common: Common,
    },
}

/// Flag/config/default resolution shared by all commands.
struct Resolved {
    cfg: ConfigFile,
    settings: Settings,
}

impl Resolved {
    fn new(common: &Common) -> CliResult<Self> {
        let cfg = match &common.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let defaults = Settings::default();
        let settings = Settings {
            ref_n: cfg.get(&common.ref_n, "ref_n", defaults.ref_n)?,
            ref_m: cfg.get(&common.ref_m, "ref_m", defaults.ref_m)?,
            floor: cfg.get(&common.saturation_floor, "saturation_floor", defaults.floor)?,
            per_decade: cfg.get(&common.per_decade, "per_decade", defaults.per_decade)?,
        };
        if settings.floor <= 0.0 || !settings.floor.is_finite() {
            return Err(CliError::Validation(
                "saturation floor must be a positive finite number".into(),
            ));
        }
        if settings.per_decade == 0 {
            return Err(CliError::Validation(
                "per-decade grid density must be at least 1".into(),
            ));
        }
        Ok(Self { cfg, settings })
    }

    fn require_f64(&self, flag: &Option<f64>, key: &str) -> CliResult<f64> {
        self.cfg
            .opt(flag, key)?
            .ok_or_else(|| CliError::Validation(format!("missing required value `{key}`")))
    }

    fn require_u64(&self, flag: &Option<u64>, key: &str) -> CliResult<u64> {
        self.cfg
            .opt(flag, key)?
            .ok_or_else(|| CliError::Validation(format!("missing required value `{key}`")))
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Estimate(common) => {
            let r = Resolved::new(&common)?;
            let q = r.require_f64(&common.q, "q")?;
            let n = r.require_u64(&common.n, "n")?;
            let estimator = r
                .cfg
                .get(&common.estimator, "estimator", "b".to_string())?;
            let p = r.cfg.opt(&common.p, "p")?;
            let strategy = r.cfg.opt(&common.strategy, "strategy")?;
            let line = run::run_estimate(&estimator, p, q, n, strategy.as_deref(), &r.settings)?;
            println!("{line}");
            Ok(())
        }
        Command::Sweep(common) => {
            let r = Resolved::new(&common)?;
            let q = r.require_f64(&common.q, "q")?;
            let estimators = r
                .cfg
                .get(&common.estimators, "estimators", "b".to_string())?;
            let p = r.cfg.opt(&common.p, "p")?;
            let strategy = r.cfg.opt(&common.strategy, "strategy")?;
            let n_max = r.cfg.get(&common.n_max, "n_max", experiments::DEFAULT_N_MAX)?;
            let table = run::run_sweep(q, p, strategy.as_deref(), &estimators, n_max, &r.settings)?;
            let out = r.cfg.opt(&common.out, "out")?;
            write_output(&out, &table.to_csv())
        }
        Command::Rate(common) => {
            let r = Resolved::new(&common)?;
            let p = r.require_f64(&common.p, "p")?;
            let q = r.require_f64(&common.q, "q")?;
            let estimator = r
                .cfg
                .get(&common.estimator, "estimator", "b".to_string())?;
            let n_max = r.cfg.get(&common.n_max, "n_max", experiments::DEFAULT_N_MAX)?;
            let exponent = r.cfg.opt(&common.exponent, "exponent")?;
            let fit_lo = r.cfg.opt(&common.fit_lo, "fit_lo")?;
            let fit_hi = r.cfg.opt(&common.fit_hi, "fit_hi")?;
            let window = match (fit_lo, fit_hi) {
                (Some(lo), Some(hi)) => Some((lo, hi)),
                (None, None) => None,
                _ => {
                    return Err(CliError::Validation(
                        "fit window needs both fit_lo and fit_hi".into(),
                    ))
                }
            };
            let outcome =
                run::run_rate(p, q, &estimator, n_max, exponent, window, &r.settings)?;
            print!("{}", outcome.text);
            let out = r.cfg.opt(&common.out, "out")?;
            if out.is_some() {
                write_output(&out, &outcome.scaled.to_csv())?;
            }
            Ok(())
        }
        Command::Spectral(common) => {
            let r = Resolved::new(&common)?;
            let p = r.require_f64(&common.p, "p")?;
            let q = r.require_f64(&common.q, "q")?;
            let alpha = r.cfg.opt(&common.alpha, "alpha")?;
            let spectrum = r.cfg.opt(&common.spectrum, "spectrum")?;
            let source = match (alpha, spectrum) {
                (Some(a), None) => zeta_deficiency::spectral::SpectrumSource::power_law(a)
                    .map_err(CliError::from)?,
                (None, Some(path)) => run::load_spectrum(&path)?,
                (Some(_), Some(_)) => {
                    return Err(CliError::Validation(
                        "choose either --alpha or --spectrum, not both".into(),
                    ))
                }
                (None, None) => {
                    return Err(CliError::Validation(
                        "spectral runs need --alpha or --spectrum".into(),
                    ))
                }
            };
            let n_max = r.cfg.opt(&common.n_max, "n_max")?;
            let table = run::run_spectral(source, p, q, n_max, &r.settings)?;
            let out = r.cfg.opt(&common.out, "out")?;
            write_output(&out, &table.to_csv())
        }
        Command::Experiment { id, common } => {
            let r = Resolved::new(&common)?;
            let out = r.cfg.opt(&common.out, "out")?;
            let n_max = r.cfg.opt(&common.n_max, "n_max")?;
            match id.to_ascii_lowercase().as_str() {
                "i" | "1" => {
                    let t = experiments::experiment_i(
                        &r.settings,
                        n_max.unwrap_or(experiments::DEFAULT_N_MAX),
                    )?;
                    write_output(&out, &t.to_csv())
                }
                "ii" | "2" => {
                    let t = experiments::experiment_ii(
                        &r.settings,
                        n_max.unwrap_or(experiments::DEFAULT_N_MAX),
                    )?;
                    write_output(&out, &t.to_csv())
                }
                "iii" | "3" => {
                    let o = experiments::experiment_iii(
                        &r.settings,
                        n_max.unwrap_or(experiments::DEFAULT_N_MAX),
                    )?;
                    print!("{}", o.text);
                    if out.is_some() {
                        write_output(&out, &o.scaled.to_csv())?;
                    }
                    Ok(())
                }
                "iv" | "4" => {
                    let t = experiments::experiment_iv(
                        &r.settings,
                        n_max.unwrap_or(experiments::DEFAULT_N_MAX),
                    )?;
                    write_output(&out, &t.to_csv())
                }
                "v" | "5" => {
                    let o = experiments::experiment_v(
                        &r.settings,
                        n_max.unwrap_or(experiments::DEFAULT_N_MAX),
                    )?;
                    print!("{}", o.text);
                    if out.is_some() {
                        write_output(&out, &o.scaled.to_csv())?;
                    }
                    Ok(())
                }
                "vi" | "6" => {
                    let t = experiments::experiment_vi(
                        &r.settings,
                        n_max.unwrap_or(experiments::SPECTRAL_N_MAX),
                    )?;
                    write_output(&out, &t.to_csv())
                }
                "appendix-f" => {
                    let t = experiments::experiment_appendix_f(
                        &r.settings,
                        n_max.unwrap_or(experiments::DEFAULT_N_MAX),
                    )?;
                    write_output(&out, &t.to_csv())
                }
                other => Err(CliError::Validation(format!(
                    "unknown experiment `{other}` (expected I, II, III, IV, V, VI or appendix-f)"
                ))),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
