//! Deterministic report emitters.
//!
//! Every artifact is either a CSV (one record per row, fixed column
//! order, floats printed as `{:.17e}` so parsing them back reproduces the
//! bits) or a pretty-printed JSON document with a trailing newline. All
//! values are computed by sequential or order-preserving reductions, so
//! identical inputs yield byte-identical files regardless of thread
//! count.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::analysis::{scan_description, MultiplierFamily};
use crate::error::Result;
use crate::experiments::{max_ratio, AsymptoticsRow, EstimateReport, TraceCheckReport, WakeProfile};
use crate::symbols::OseenParams;

/// Formats a float for CSV with enough digits to round-trip exactly.
pub fn csv_float(v: f64) -> String {
    format!("{v:.17e}")
}

/// A row type with a fixed CSV shape.
pub trait CsvRecord {
    /// Header line, without trailing newline.
    fn header() -> &'static str;
    /// One record, without trailing newline.
    fn record(&self) -> String;
}

impl CsvRecord for EstimateReport {
    fn header() -> &'static str {
        "regime,datum,exponent,lhs_norm,rhs_norm,ratio,rhs_variant,grid_n,half_width,level_count"
    }
    fn record(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.regime,
            self.datum,
            self.exponent,
            csv_float(self.lhs_norm),
            csv_float(self.rhs_norm),
            csv_float(self.ratio),
            self.rhs_variant,
            self.grid_n,
            self.half_width,
            self.level_count
        )
    }
}

impl CsvRecord for AsymptoticsRow {
    fn header() -> &'static str {
        "label,regime,small_k_slope,small_k_expected,large_k_slope,large_k_expected"
    }
    fn record(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.label,
            self.regime,
            csv_float(self.small_k_slope),
            self.small_k_expected,
            csv_float(self.large_k_slope),
            self.large_k_expected
        )
    }
}

impl CsvRecord for TraceCheckReport {
    fn header() -> &'static str {
        "datum,exponent,lhs_norm,rhs_norm,ratio"
    }
    fn record(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.datum,
            self.exponent,
            csv_float(self.lhs_norm),
            csv_float(self.rhs_norm),
            csv_float(self.ratio)
        )
    }
}

/// Renders records to CSV text (header, rows, trailing newline).
pub fn csv_string<T: CsvRecord>(rows: &[T]) -> String {
    let mut out = String::from(T::header());
    out.push('\n');
    for row in rows {
        out.push_str(&row.record());
        out.push('\n');
    }
    out
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut f = fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

/// Writes records as a CSV file, creating parent directories.
pub fn write_csv<T: CsvRecord>(path: &Path, rows: &[T]) -> Result<()> {
    write_text(path, &csv_string(rows))
}

/// Writes a value as pretty JSON with a trailing newline, creating parent
/// directories.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let body = serde_json::to_string_pretty(value)
        .expect("report types serialize without fallible map keys");
    write_text(path, &format!("{body}\n"))
}

/// One boundary-to-interior quadrature inequality check, labeled by its
/// datum.
#[derive(Debug, Clone, Serialize)]
pub struct J1Row {
    pub datum: String,
    pub exponent: f64,
    /// Field norm `‖J₁ b‖_{L^p}`.
    pub lhs: f64,
    /// The explicit constant times the boundary seminorm.
    pub rhs: f64,
    pub ratio: f64,
}

impl CsvRecord for J1Row {
    fn header() -> &'static str {
        "datum,exponent,lhs,rhs,ratio"
    }
    fn record(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.datum,
            self.exponent,
            csv_float(self.lhs),
            csv_float(self.rhs),
            csv_float(self.ratio)
        )
    }
}

/// Wake profile CSV: one `decay_length` row per ray, then the summary
/// ratio rows.
pub fn wake_csv_string(profile: &WakeProfile) -> String {
    let mut out = String::from("quantity,angle_degrees,value\n");
    for ray in &profile.rays {
        out.push_str(&format!(
            "decay_length,{},{}\n",
            ray.angle_degrees,
            csv_float(ray.decay_length)
        ));
    }
    out.push_str(&format!(
        "anisotropy_ratio,,{}\n",
        csv_float(profile.anisotropy_ratio)
    ));
    if let Some(t) = profile.transverse_ratio {
        out.push_str(&format!("transverse_ratio,,{}\n", csv_float(t)));
    }
    out
}

/// Writes the wake profile CSV.
pub fn write_wake_csv(path: &Path, profile: &WakeProfile) -> Result<()> {
    write_text(path, &wake_csv_string(profile))
}

/// Aggregate of one estimate sweep, written next to the row CSV.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub regime: String,
    pub rhs_variant: String,
    pub exponents: Vec<f64>,
    pub row_count: usize,
    pub max_ratio: f64,
    pub grid_n: usize,
    pub half_width: f64,
    pub level_count: usize,
}

impl SweepSummary {
    /// Folds sweep rows into their summary; `None` for an empty sweep.
    pub fn from_reports(rows: &[EstimateReport]) -> Option<Self> {
        let first = rows.first()?;
        let mut exponents: Vec<f64> = Vec::new();
        for row in rows {
            if !exponents.contains(&row.exponent) {
                exponents.push(row.exponent);
            }
        }
        Some(Self {
            regime: first.regime.clone(),
            rhs_variant: first.rhs_variant.clone(),
            exponents,
            row_count: rows.len(),
            max_ratio: max_ratio(rows),
            grid_n: first.grid_n,
            half_width: first.half_width,
            level_count: first.level_count,
        })
    }
}

/// One multiplier family's bound, flattened for the JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct MultiplierReport {
    pub name: String,
    pub params: Option<OseenParams>,
    pub t_list: Vec<f64>,
    /// The uniform Marcinkiewicz-style bound.
    pub m: f64,
    pub worst_k: f64,
    pub worst_t: f64,
    /// Relative change of the bound under 2x scan refinement.
    pub refinement_delta: f64,
    pub grid_spec: String,
}

impl MultiplierReport {
    /// Evaluates one family's bound into report form.
    pub fn evaluate(family: &MultiplierFamily) -> Result<Self> {
        let bound = family.bound()?;
        Ok(Self {
            name: family.name.clone(),
            params: family.params,
            t_list: family.t_list.clone(),
            m: bound.sup,
            worst_k: bound.worst_k,
            worst_t: bound.worst_t,
            refinement_delta: bound.refinement_shift,
            grid_spec: scan_description(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::slip_data_symbol;
    use crate::experiments::WakeRay;

    fn sample_rows() -> Vec<EstimateReport> {
        vec![
            EstimateReport {
                regime: "elliptic".into(),
                datum: "gauss".into(),
                exponent: 2.0,
                lhs_norm: 1.5,
                rhs_norm: 3.0,
                ratio: 0.5,
                rhs_variant: "full".into(),
                grid_n: 128,
                half_width: 20.0,
                level_count: 24,
            },
            EstimateReport {
                regime: "elliptic".into(),
                datum: "bump".into(),
                exponent: 3.0,
                lhs_norm: 2.0,
                rhs_norm: 1.0,
                ratio: 2.0,
                rhs_variant: "full".into(),
                grid_n: 128,
                half_width: 20.0,
                level_count: 24,
            },
        ]
    }

    #[test]
    fn csv_output_has_fixed_shape_and_roundtrippable_floats() {
        let text = csv_string(&sample_rows());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], EstimateReport::header());
        assert!(lines[1].starts_with("elliptic,gauss,2,"));
        let ratio_field = lines[1].split(',').nth(5).unwrap();
        assert_eq!(ratio_field.parse::<f64>().unwrap(), 0.5);
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn sweep_summary_collects_exponents_and_the_worst_ratio() {
        let summary = SweepSummary::from_reports(&sample_rows()).unwrap();
        assert_eq!(summary.exponents, vec![2.0, 3.0]);
        assert_eq!(summary.row_count, 2);
        assert_eq!(summary.max_ratio, 2.0);
        assert!(SweepSummary::from_reports(&[]).is_none());
    }

    #[test]
    fn wake_csv_carries_ray_and_ratio_rows() {
        let profile = WakeProfile {
            rays: vec![
                WakeRay {
                    angle_degrees: 0.0,
                    decay_length: 10.0,
                },
                WakeRay {
                    angle_degrees: 180.0,
                    decay_length: 1.0,
                },
            ],
            anisotropy_ratio: 10.0,
            transverse_ratio: None,
        };
        let text = wake_csv_string(&profile);
        assert!(text.contains("decay_length,0,"));
        assert!(text.contains("anisotropy_ratio,,"));
        assert!(!text.contains("transverse_ratio"));
    }

    #[test]
    fn files_are_written_with_parents_and_identical_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/out/report.csv");
        write_csv(&path, &sample_rows()).unwrap();
        let first = std::fs::read(&path).unwrap();
        write_csv(&path, &sample_rows()).unwrap();
        assert_eq!(first, std::fs::read(&path).unwrap());

        let jpath = dir.path().join("nested/out/summary.json");
        let summary = SweepSummary::from_reports(&sample_rows()).unwrap();
        write_json(&jpath, &summary).unwrap();
        let body = std::fs::read_to_string(&jpath).unwrap();
        assert!(body.ends_with('\n'));
        assert!(body.contains("\"max_ratio\""));
    }

    #[test]
    fn multiplier_reports_flatten_the_bound() {
        let params = OseenParams::new(1.0, -1.0, 1.0).unwrap();
        let report = MultiplierReport::evaluate(&slip_data_symbol(params)).unwrap();
        assert_eq!(report.name, "slip_data_symbol");
        assert!(report.m.is_finite() && report.m > 0.0);
        assert!(report.refinement_delta < 0.05);
        assert!(report.grid_spec.contains("log grid"));
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"worst_k\""));
    }
}
