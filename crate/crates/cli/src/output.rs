//! CSV emission and report rendering. Numbers are written with Rust's
//! shortest round-trip formatting, so output is byte-deterministic for a
//! fixed configuration and reloads losslessly.

use zeta_deficiency::RateReport64;

/// A sweep result: one row per grid point, one column per error curve.
#[derive(Debug, Clone)]
pub struct Table {
    pub grid: Vec<u64>,
    pub labels: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push('n');
        for label in &self.labels {
            out.push(',');
            out.push_str(label);
        }
        out.push('\n');
        for (row, &n) in self.grid.iter().enumerate() {
            out.push_str(&n.to_string());
            for col in &self.columns {
                out.push(',');
                out.push_str(&format_value(col[row]));
            }
            out.push('\n');
        }
        out
    }

    /// Column values by header label.
    pub fn column(&self, label: &str) -> Option<&[f64]> {
        let idx = self.labels.iter().position(|l| l == label)?;
        Some(&self.columns[idx])
    }
}

/// Shortest decimal that round-trips the value.
pub fn format_value(x: f64) -> String {
    format!("{x}")
}

pub fn render_rate_report(
    label: &str,
    report: &RateReport64,
    scaling_exponent: f64,
) -> String {
    let plateau = match report.plateau_constant {
        Some(c) => format!("{} (plateau: yes)", format_value(c)),
        None => "none (plateau: no)".to_string(),
    };
    format!(
        "estimator:            {label}\n\
         fit window:           n in [{}, {}]\n\
         fitted slope:         {}\n\
         theoretical exponent: {}\n\
         scaling exponent:     {}\n\
         plateau constant:     {plateau}\n\
         plateau stability:    {}\n\
         saturation detected:  {}\n",
        report.fit_window.0,
        report.fit_window.1,
        format_value(report.fitted_slope),
        format_value(report.theoretical_exponent),
        format_value(scaling_exponent),
        format_value(report.plateau_stability),
        if report.saturation_floor_detected { "yes" } else { "no" },
    )
}
