//! JSON report types and CSV series.
//!
//! Every float goes through [`Num`], which prints 17 significant digits so the
//! value parses back to the same `f64`. Non-finite values become `null`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::de::Deserializer;
use serde::ser::{Error as _, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(S::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Num(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN)))
    }
}

impl From<f64> for Num {
    fn from(v: f64) -> Self {
        Num(v)
    }
}

pub fn num_pair((a, b): (f64, f64)) -> [Num; 2] {
    [Num(a), Num(b)]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitSummary {
    pub threshold: Num,
    pub p_u: Num,
    pub beta: Num,
    pub sigma: Num,
    pub xi: Num,
    pub xi_se: Num,
    pub xi_ci: [Num; 2],
    pub epsilon: Num,
    pub loglik: Num,
    pub n_exceedances: usize,
    pub n_total: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadiusSummary {
    pub method: String,
    pub delta: Num,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub replicates: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveRow {
    pub x: Num,
    pub probability: Num,
    pub saturated: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveReport {
    pub name: String,
    pub method: String,
    pub ambiguity: Option<String>,
    pub delta: Option<Num>,
    /// Why the curve is missing, when it is.
    pub unavailable: Option<String>,
    pub points: Vec<CurveRow>,
    pub csv: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundRow {
    pub x: Num,
    pub reference: Num,
    pub preasymptotic: Num,
    pub asymptotic: Num,
    pub ratio: Num,
    pub saturated: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetReport {
    pub ambiguity: String,
    pub delta: Num,
    pub rows: Vec<BoundRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReturnLevel {
    pub period: Num,
    pub curve: String,
    pub level: Num,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fit: Option<FitSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub radius: Vec<RadiusSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub curves: Vec<CurveReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub sets: Vec<SetReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub return_levels: Vec<ReturnLevel>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub checks: Option<serde_json::Value>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// CSV with columns `x,probability`, 17 significant digits.
pub fn curve_csv(points: &[CurveRow]) -> String {
    let mut out = String::from("x,probability\n");
    for p in points {
        let _ = writeln!(out, "{:.16e},{:.16e}", p.x.0, p.probability.0);
    }
    out
}

/// `<dir>/<stem>.<name>.csv` next to the JSON report.
pub fn csv_path(report: &Path, name: &str) -> PathBuf {
    let stem = report.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    report.with_file_name(format!("{stem}.{name}.csv"))
}
