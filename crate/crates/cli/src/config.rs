//! Run configuration. Precedence: command-line flags, then a `key = value`
//! config file, then built-in defaults. No environment variables, so a run
//! is fully described by its flag set and config file.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use zeta_deficiency::analysis::{DEFAULT_POINTS_PER_DECADE, DEFAULT_SATURATION_FLOOR};
use zeta_deficiency::series::{REFERENCE_CORRECTIONS, REFERENCE_N};

use crate::error::{CliError, CliResult};

const KNOWN_KEYS: &[&str] = &[
    "p",
    "q",
    "n",
    "n_max",
    "estimator",
    "estimators",
    "strategy",
    "alpha",
    "spectrum",
    "out",
    "ref_n",
    "ref_m",
    "saturation_floor",
    "fit_lo",
    "fit_hi",
    "per_decade",
    "exponent",
];

/// Parsed config file contents.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("config line {}: expected `key = value`", idx + 1))
            })?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Validation(format!(
                    "config line {}: unknown key `{key}`",
                    idx + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    /// Flag value if present, else config value, else `None`.
    pub fn opt<T: FromStr + Clone>(&self, flag: &Option<T>, key: &str) -> CliResult<Option<T>> {
        if let Some(v) = flag {
            return Ok(Some(v.clone()));
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::Validation(format!("config key `{key}`: cannot parse `{raw}`"))),
        }
    }

    /// Flag value if present, else config value, else the default.
    pub fn get<T: FromStr + Clone>(&self, flag: &Option<T>, key: &str, default: T) -> CliResult<T> {
        Ok(self.opt(flag, key)?.unwrap_or(default))
    }
}

/// Resolved knobs shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    /// Partial-sum length of the reference evaluator.
    pub ref_n: u64,
    /// Correction order of the reference evaluator.
    pub ref_m: u32,
    /// Saturation floor for error series.
    pub floor: f64,
    /// Geometric grid density.
    pub per_decade: u32,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            ref_n: REFERENCE_N,
            ref_m: REFERENCE_CORRECTIONS,
            floor: DEFAULT_SATURATION_FLOOR,
            per_decade: DEFAULT_POINTS_PER_DECADE,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_precedence() {
        let cfg = ConfigFile::parse("# comment\nq = 3\nn_max = 100\n").unwrap();
        assert_eq!(cfg.get::<f64>(&None, "q", 5.0).unwrap(), 3.0);
        assert_eq!(cfg.get::<f64>(&Some(7.0), "q", 5.0).unwrap(), 7.0);
        assert_eq!(cfg.get::<u64>(&None, "n", 42).unwrap(), 42);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        assert!(ConfigFile::parse("bogus = 1\n").is_err());
        assert!(ConfigFile::parse("just some text\n").is_err());
        assert!(ConfigFile::parse("q = not-a-number\n")
            .unwrap()
            .get::<f64>(&None, "q", 1.0)
            .is_err());
    }
}
