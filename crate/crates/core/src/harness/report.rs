//! Study results and their CSV / JSON renderings.
//!
//! CSV is the flat per-section table; JSON carries the same rows under the
//! same field names plus the study-level metadata. Floats are written with
//! 17 significant digits so parsing them back reproduces the exact bits,
//! and JSON maps non-finite values to the strings `"inf"`, `"-inf"`,
//! `"nan"` (plain JSON has no spelling for them). Serializing a parsed
//! report reproduces the original text byte for byte.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Output encodings for a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format {other:?}, expected csv or json")),
        }
    }
}

impl std::fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

/// JSON representation of possibly non-finite floats.
mod float_repr {
    use serde::de::{Error, Unexpected, Visitor};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    struct FloatVisitor;

    impl<'de> Visitor<'de> for FloatVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            f.write_str("a float or one of \"inf\", \"-inf\", \"nan\"")
        }

        fn visit_f64<E: Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(E::invalid_value(Unexpected::Str(other), &self)),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(FloatVisitor)
    }
}

/// [`float_repr`] lifted to optional fields; a disabled check stays `null`.
mod opt_float_repr {
    use serde::de::Visitor;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::float_repr;

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => float_repr::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    struct OptVisitor;

    impl<'de> Visitor<'de> for OptVisitor {
        type Value = Option<f64>;

        fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            f.write_str("a float, a non-finite string, or null")
        }

        fn visit_none<E>(self) -> Result<Self::Value, E> {
            Ok(None)
        }

        fn visit_unit<E>(self) -> Result<Self::Value, E> {
            Ok(None)
        }

        fn visit_some<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
            float_repr::deserialize(d).map(Some)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        d.deserialize_option(OptVisitor)
    }

    // Quiet the unused-import lint when the module is compiled alone.
    #[allow(dead_code)]
    fn _assert_traits<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<f64>::deserialize(d)
    }
}

/// One row of a study: everything measured at a single section size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyRecord {
    pub n: usize,
    #[serde(rename = "logdetT_mag", with = "float_repr")]
    pub logdet_t_mag: f64,
    #[serde(rename = "logdetT_phase", with = "float_repr")]
    pub logdet_t_phase: f64,
    #[serde(rename = "logdetM_mag", with = "float_repr")]
    pub logdet_m_mag: f64,
    #[serde(rename = "logdetM_phase", with = "float_repr")]
    pub logdet_m_phase: f64,
    #[serde(with = "float_repr")]
    pub ratio_re: f64,
    #[serde(with = "float_repr")]
    pub ratio_im: f64,
    #[serde(with = "float_repr")]
    pub abs_error: f64,
    #[serde(with = "opt_float_repr", default)]
    pub schur_residual: Option<f64>,
    #[serde(with = "opt_float_repr", default)]
    pub entry_residual: Option<f64>,
    #[serde(with = "opt_float_repr", default)]
    pub inverse_norm: Option<f64>,
}

pub const CSV_HEADER: &str = "n,logdetT_mag,logdetT_phase,logdetM_mag,logdetM_phase,ratio_re,ratio_im,abs_error,schur_residual,entry_residual,inverse_norm";

/// 17 significant digits: enough to reproduce any `f64` exactly.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

/// A completed convergence study: metadata shared by every section plus
/// the per-section records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceReport {
    /// Human-readable description of the symbol.
    pub symbol: String,
    pub p: Vec<i64>,
    pub q: Vec<i64>,
    pub truncation: usize,
    #[serde(with = "float_repr")]
    pub limit_re: f64,
    #[serde(with = "float_repr")]
    pub limit_im: f64,
    /// The limit matrix was exactly singular, so the limit is an exact zero.
    pub limit_is_zero: bool,
    #[serde(with = "float_repr")]
    pub factor_residual: f64,
    #[serde(with = "float_repr")]
    pub szego_g_re: f64,
    #[serde(with = "float_repr")]
    pub szego_g_im: f64,
    #[serde(with = "float_repr")]
    pub szego_e_re: f64,
    #[serde(with = "float_repr")]
    pub szego_e_im: f64,
    #[serde(with = "float_repr")]
    pub szego_tail: f64,
    pub duplicate_rows: Vec<i64>,
    pub duplicate_cols: Vec<i64>,
    pub records: Vec<StudyRecord>,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(128 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.n,
                fmt_float(r.logdet_t_mag),
                fmt_float(r.logdet_t_phase),
                fmt_float(r.logdet_m_mag),
                fmt_float(r.logdet_m_phase),
                fmt_float(r.ratio_re),
                fmt_float(r.ratio_im),
                fmt_float(r.abs_error),
                fmt_opt(r.schur_residual),
                fmt_opt(r.entry_residual),
                fmt_opt(r.inverse_norm),
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
        }
    }

    /// `(n, abs_error)` pairs in schedule order.
    pub fn error_trajectory(&self) -> Vec<(usize, f64)> {
        self.records.iter().map(|r| (r.n, r.abs_error)).collect()
    }
}
