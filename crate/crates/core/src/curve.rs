//! Worst-case exceedance curves over a grid of levels, and return levels.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divergence::DivergenceSpec;
use crate::error::{Error, Result};
use crate::evt::{target_probability, TailModel};
use crate::{fdiv, wasserstein};

/// Discrepancy kind together with its radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AmbiguitySet {
    Wasserstein { s: f64, delta: f64 },
    FDivergence { spec: DivergenceSpec, delta: f64 },
}

impl AmbiguitySet {
    pub fn delta(&self) -> f64 {
        match *self {
            AmbiguitySet::Wasserstein { delta, .. } | AmbiguitySet::FDivergence { delta, .. } => delta,
        }
    }

    pub fn label(&self) -> String {
        match self {
            AmbiguitySet::Wasserstein { s, .. } => format!("wasserstein:{s}"),
            AmbiguitySet::FDivergence { spec, .. } => spec.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveMethod {
    Reference,
    Preasymptotic,
    Asymptotic,
}

impl fmt::Display for CurveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveMethod::Reference => "reference",
            CurveMethod::Preasymptotic => "preasymptotic",
            CurveMethod::Asymptotic => "asymptotic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub reference: f64,
    pub probability: f64,
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCaseCurve {
    pub method: CurveMethod,
    pub set: Option<AmbiguitySet>,
    pub points: Vec<CurvePoint>,
}

impl WorstCaseCurve {
    pub fn reference(model: &TailModel, xs: &[f64]) -> Result<Self> {
        let points = xs
            .iter()
            .map(|&x| {
                let p = model.survival(x)?;
                Ok(CurvePoint { x, reference: p, probability: p, saturated: false })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { method: CurveMethod::Reference, set: None, points })
    }

    /// Evaluates the bound at every level concurrently; the output order
    /// follows `xs` regardless of scheduling.
    pub fn compute(model: &TailModel, set: AmbiguitySet, method: CurveMethod, xs: &[f64]) -> Result<Self> {
        if method == CurveMethod::Reference {
            return Self::reference(model, xs);
        }
        let points = xs
            .par_iter()
            .map(|&x| point(model, &set, method, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { method, set: Some(set), points })
    }

    pub fn name(&self) -> String {
        match &self.set {
            None => "reference".into(),
            Some(set) => format!("{}-{}", set.label().replace(':', "-"), self.method),
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.x).collect()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.probability).collect()
    }

    /// Smallest level whose probability is at most `1/(period · obs_per_year)`,
    /// interpolated log-linearly in both coordinates between grid points.
    pub fn return_level(&self, period_years: f64, obs_per_year: f64) -> Result<f64> {
        let q = target_probability(period_years, obs_per_year)?;
        let pts = &self.points;
        let Some(i) = pts.iter().position(|p| p.probability <= q) else {
            let resolved = pts.iter().map(|p| p.probability).fold(f64::INFINITY, f64::min);
            return Err(Error::Extrapolation { target: q, resolved });
        };
        if i == 0 {
            if pts[0].probability < q {
                return Err(Error::BelowGrid { target: q, x: pts[0].x, probability: pts[0].probability });
            }
            return Ok(pts[0].x);
        }
        let (a, b) = (pts[i - 1], pts[i]);
        if b.probability <= 0.0 || a.x <= 0.0 {
            return Ok(b.x);
        }
        let t = (q.ln() - a.probability.ln()) / (b.probability.ln() - a.probability.ln());
        Ok((a.x.ln() + t * (b.x.ln() - a.x.ln())).exp())
    }
}

fn point(model: &TailModel, set: &AmbiguitySet, method: CurveMethod, x: f64) -> Result<CurvePoint> {
    let reference = model.survival(x)?;
    let (probability, saturated) = match (*set, method) {
        (AmbiguitySet::Wasserstein { s, delta }, CurveMethod::Preasymptotic) => {
            let r = wasserstein::preasymptotic_bound(model, x, s, delta)?;
            (r.bound, r.saturated)
        }
        (AmbiguitySet::Wasserstein { s, delta }, CurveMethod::Asymptotic) => {
            let b = wasserstein::asymptotic_bound(x, s, delta);
            (b, b >= 1.0)
        }
        (AmbiguitySet::FDivergence { spec, delta }, CurveMethod::Preasymptotic) => {
            let r = fdiv::preasymptotic_bound(model, x, &spec, delta)?;
            (r.bound, r.saturated)
        }
        (AmbiguitySet::FDivergence { spec, delta }, CurveMethod::Asymptotic) => {
            let r = fdiv::asymptotic_bound_at(model, x, &spec, delta)?;
            (r.bound, r.saturated)
        }
        (_, CurveMethod::Reference) => (reference, false),
    };
    Ok(CurvePoint { x, reference, probability, saturated })
}

/// Grid of levels, `min:max:points:log|lin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, points: usize, log: bool) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::InvalidInput(format!("grid needs finite min < max, got {min}..{max}")));
        }
        if points < 2 {
            return Err(Error::InvalidInput("grid needs at least 2 points".into()));
        }
        if log && min <= 0.0 {
            return Err(Error::InvalidInput("log grid needs a positive minimum".into()));
        }
        Ok(Self { min, max, points, log })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        let mut v: Vec<f64> = (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                if self.log {
                    (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + t * (self.max - self.min)
                }
            })
            .collect();
        v[0] = self.min;
        v[self.points - 1] = self.max;
        v
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = || Error::InvalidInput(format!("grid must look like min:max:points:log|lin, got {s:?}"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let min = parts[0].parse().map_err(|_| bad())?;
        let max = parts[1].parse().map_err(|_| bad())?;
        let points = parts[2].parse().map_err(|_| bad())?;
        let log = match parts[3] {
            "log" => true,
            "lin" => false,
            _ => return Err(bad()),
        };
        Self::new(min, max, points, log)
    }
}
