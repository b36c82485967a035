//! Sorted nonnegative samples, their empirical CDF and mean-excess diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonnegative finite observations stored in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("sample is empty".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidInput(format!(
                "sample values must be finite and nonnegative, found {bad}"
            )));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `#{X_i ≤ x} / n`.
    pub fn empirical_cdf(&self, x: f64) -> f64 {
        self.count_at_most(x) as f64 / self.len() as f64
    }

    pub fn count_at_most(&self, x: f64) -> usize {
        self.values.partition_point(|v| *v <= x)
    }

    /// Observations strictly above `u`, ascending.
    pub fn exceedances(&self, u: f64) -> &[f64] {
        &self.values[self.count_at_most(u)..]
    }

    /// Excesses `X_i − u` for the observations above `u`.
    pub fn excesses(&self, u: f64) -> Vec<f64> {
        self.exceedances(u).iter().map(|x| x - u).collect()
    }

    /// Empirical quantile with linear interpolation between order statistics
    /// (type 7: position `(n − 1)·q`).
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidInput(format!("quantile level {q} outside [0, 1]")));
        }
        let pos = (self.len() - 1) as f64 * q;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let w = pos - lo as f64;
        Ok(self.values[lo] * (1.0 - w) + self.values[hi] * w)
    }

    /// Empirical mean residual life `Σ(X_i − u)1{X_i > u} / #{X_i > u}` for each
    /// threshold. Thresholds without exceedances are dropped; if nothing is
    /// left the call fails.
    pub fn mean_excess_curve(&self, thresholds: &[f64]) -> Result<Vec<(f64, f64)>> {
        let out: Vec<(f64, f64)> = thresholds
            .iter()
            .filter_map(|&u| {
                let above = self.exceedances(u);
                if above.is_empty() {
                    None
                } else {
                    let total: f64 = above.iter().map(|x| x - u).sum();
                    Some((u, total / above.len() as f64))
                }
            })
            .collect();
        if out.is_empty() {
            let threshold = thresholds.iter().copied().fold(f64::NAN, f64::min);
            return Err(Error::NoExceedances { threshold });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s123() -> Sample {
        Sample::new(vec![3.0, 1.0, 2.0]).unwrap()
    }

    #[test]
    fn ecdf_counts() {
        let s = s123();
        assert_eq!(s.empirical_cdf(2.0), 2.0 / 3.0);
        assert_eq!(s.empirical_cdf(0.5), 0.0);
        assert_eq!(s.empirical_cdf(3.0), 1.0);
        assert_eq!(s.empirical_cdf(1.999), 1.0 / 3.0);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Sample::new(vec![]).is_err());
        assert!(Sample::new(vec![1.0, -0.5]).is_err());
        assert!(Sample::new(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn mean_excess_examples() {
        let me = s123().mean_excess_curve(&[1.5]).unwrap();
        assert_eq!(me, vec![(1.5, 1.0)]);
        let single = Sample::new(vec![5.0]).unwrap();
        assert_eq!(single.mean_excess_curve(&[0.0]).unwrap(), vec![(0.0, 5.0)]);
    }

    #[test]
    fn mean_excess_drops_empty_thresholds() {
        let s = s123();
        assert_eq!(s.mean_excess_curve(&[1.5, 3.0, 10.0]).unwrap().len(), 1);
        assert!(matches!(s.mean_excess_curve(&[3.0, 4.0]), Err(Error::NoExceedances { .. })));
    }

    #[test]
    fn quantile_interpolates() {
        let s = Sample::new(vec![0.0, 10.0]).unwrap();
        assert_eq!(s.quantile(0.25).unwrap(), 2.5);
        assert_eq!(s123().quantile(1.0).unwrap(), 3.0);
    }
}
