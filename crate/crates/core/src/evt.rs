//! Generalized Pareto tail fitting and the semi-parametric tail model
//!
//! ```text
//! P(X > x) ≈ p_u · (1 + (x − u)/(β σ))^(−β),   x ≥ u,
//! ```
//!
//! where `p_u` is the empirical exceedance rate of the threshold `u`, `β > 0`
//! the tail index and `σ` the GPD scale. The GPD shape is `ξ = 1/β`, so the
//! usual exceedance parametrization `(1 + ξ y/σ)^(−1/ξ)` has the same `σ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{self, QuadTol};
use crate::sample::Sample;

/// Two-sided 97.5% standard normal quantile.
pub const Z_975: f64 = 1.959_963_984_540_054;

/// Minimum number of exceedances accepted by [`fit_gpd_mle`].
pub const MIN_EXCEEDANCES: usize = 10;

/// Semi-parametric GPD tail above a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailModel {
    pub u: f64,
    pub p_u: f64,
    pub beta: f64,
    pub sigma: f64,
}

impl TailModel {
    pub fn new(u: f64, p_u: f64, beta: f64, sigma: f64) -> Result<Self> {
        if !u.is_finite() || u < 0.0 {
            return Err(Error::InvalidInput(format!("threshold must be finite and ≥ 0, got {u}")));
        }
        if !(p_u > 0.0 && p_u <= 1.0) {
            return Err(Error::InvalidInput(format!("exceedance rate must lie in (0, 1], got {p_u}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidInput(format!("tail index must be positive, got {beta}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidInput(format!("scale must be positive, got {sigma}")));
        }
        Ok(Self { u, p_u, beta, sigma })
    }

    /// GPD shape `ξ = 1/β`.
    pub fn xi(&self) -> f64 {
        1.0 / self.beta
    }

    /// `P(X > x)` for `x ≥ u`.
    pub fn survival(&self, x: f64) -> Result<f64> {
        if x < self.u || x.is_nan() {
            return Err(Error::BelowThreshold { x, u: self.u });
        }
        Ok(self.survival_unchecked(x))
    }

    /// Survival without the domain check; levels below `u` are treated as `u`.
    pub(crate) fn survival_unchecked(&self, x: f64) -> f64 {
        self.p_u * self.conditional_survival(x)
    }

    /// `P(X > x | X > u)`.
    pub fn conditional_survival(&self, x: f64) -> f64 {
        let z = (x - self.u).max(0.0) / (self.beta * self.sigma);
        (-self.beta * z.ln_1p()).exp()
    }

    /// Density of the unconditional model on `[u, ∞)`.
    pub fn density(&self, x: f64) -> f64 {
        if x < self.u {
            return 0.0;
        }
        let z = (x - self.u) / (self.beta * self.sigma);
        self.p_u / self.sigma * (-(self.beta + 1.0) * z.ln_1p()).exp()
    }

    /// Level at which the survival equals `q ≤ p_u`; levels with `q > p_u` map to `u`.
    pub fn level_for_survival(&self, q: f64) -> f64 {
        if q >= self.p_u {
            return self.u;
        }
        let ratio = q / self.p_u;
        self.u + self.beta * self.sigma * ((-ratio.ln() / self.beta).exp_m1())
    }

    /// Smallest level whose exceedance probability is at most
    /// `1/(period · obs_per_year)`.
    pub fn return_level(&self, period_years: f64, obs_per_year: f64) -> Result<f64> {
        let q = target_probability(period_years, obs_per_year)?;
        Ok(self.level_for_survival(q))
    }

    /// `∫_a^∞ P(X > y) · s y^(s−1) dy` for `a ≥ u`.
    ///
    /// Finite exactly when `s < β`. The integral is split at a far cut-off
    /// `R`; `[a, R]` is integrated on a log scale and `[R, ∞)` by the binomial
    /// series of `(y + c)^(−β)` with `c = βσ − u`, `|c|/R ≤ 1e−6`.
    pub fn tail_moment(&self, a: f64, s: f64) -> Result<f64> {
        if s >= self.beta {
            return Err(Error::DivergentTail { s, beta: self.beta });
        }
        let a = a.max(self.u);
        let scale = self.beta * self.sigma;
        let c = scale - self.u;
        let cutoff = 1e6 * c.abs().max(a).max(1.0);
        let beta = self.beta;
        // S(y)/p_u = (scale / (y + c))^β
        let body = if a < cutoff {
            numeric::integrate(
                |t: f64| {
                    let y = t.exp();
                    s * y.powf(s) * (scale / (y + c)).powf(beta)
                },
                a.ln(),
                cutoff.ln(),
                QuadTol { abs: 0.0, rel: 1e-13, max_depth: 40 },
            )
        } else {
            0.0
        };
        let lower = a.max(cutoff);
        // s Σ_k C(−β, k) c^k R^(s−β−k) / (β + k − s), scaled by scale^β
        let mut term_coeff = 1.0;
        let mut series = 0.0;
        let ratio = c / lower;
        for k in 0..6 {
            let kf = k as f64;
            series += term_coeff / (beta + kf - s);
            term_coeff *= -(beta + kf) / (kf + 1.0) * ratio;
        }
        let tail = s * lower.powf(s) * (scale / lower).powf(beta) * series;
        Ok(self.p_u * (body + tail))
    }
}

pub(crate) fn target_probability(period_years: f64, obs_per_year: f64) -> Result<f64> {
    let n = period_years * obs_per_year;
    if !(n > 1.0) || !n.is_finite() {
        return Err(Error::InvalidInput(format!(
            "period × observations per year must exceed 1, got {n}"
        )));
    }
    Ok(1.0 / n)
}

/// Maximum-likelihood GPD fit of excesses over a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpdFit {
    pub xi: f64,
    pub sigma: f64,
    pub xi_se: f64,
    pub sigma_se: f64,
    /// Wald 95% interval for `ξ`.
    pub xi_ci: (f64, f64),
    pub loglik: f64,
    pub n: usize,
}

impl GpdFit {
    pub fn beta(&self) -> f64 {
        1.0 / self.xi
    }

    /// Half-width of the shape interval on the `1/β` scale.
    pub fn epsilon(&self) -> f64 {
        self.xi_ci.1 - self.xi
    }
}

/// Fitted tail model together with its shape interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: TailModel,
    pub xi_ci: (f64, f64),
    pub xi_se: f64,
    pub loglik: f64,
    pub n_exceedances: usize,
    pub n_total: usize,
}

impl FitResult {
    pub fn epsilon(&self) -> f64 {
        self.xi_ci.1 - self.model.xi()
    }
}

/// GPD log-likelihood of `excesses` at `(σ, ξ)`; `-∞` outside the support.
pub fn gpd_loglik(excesses: &[f64], sigma: f64, xi: f64) -> f64 {
    if !(sigma > 0.0) {
        return f64::NEG_INFINITY;
    }
    let n = excesses.len() as f64;
    if xi.abs() < 1e-12 {
        return -n * sigma.ln() - excesses.iter().sum::<f64>() / sigma;
    }
    let mut acc = 0.0;
    for &y in excesses {
        let z = xi * y / sigma;
        if z <= -1.0 {
            return f64::NEG_INFINITY;
        }
        acc += z.ln_1p();
    }
    -n * sigma.ln() - (1.0 + 1.0 / xi) * acc
}

/// Fits `(ξ, σ)` by maximum likelihood.
///
/// Nelder–Mead on `(log σ, ξ)` from several starts (moment estimator and two
/// fixed shapes), then a restart from the best vertex. The shape interval is
/// a Wald interval from the central-difference observed information.
pub fn fit_gpd_mle(excesses: &[f64]) -> Result<GpdFit> {
    if excesses.len() < MIN_EXCEEDANCES {
        return Err(Error::InvalidInput(format!(
            "at least {MIN_EXCEEDANCES} exceedances required, got {}",
            excesses.len()
        )));
    }
    if let Some(bad) = excesses.iter().find(|y| !(**y > 0.0) || !y.is_finite()) {
        return Err(Error::InvalidInput(format!("excesses must be positive and finite, got {bad}")));
    }
    let n = excesses.len() as f64;
    let mean = excesses.iter().sum::<f64>() / n;
    let var = excesses.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1.0);
    if var <= 1e-14 * mean * mean {
        return Err(Error::DegenerateLikelihood("all exceedances are equal".into()));
    }

    let xi_mom = 0.5 * (1.0 - mean * mean / var);
    let sigma_mom = 0.5 * mean * (mean * mean / var + 1.0);
    let starts = [
        (sigma_mom.max(1e-3 * mean), xi_mom.clamp(-0.4, 0.9)),
        (mean * 0.9, 0.1),
        (mean * 0.5, 0.5),
    ];
    let objective = |p: &[f64]| -gpd_loglik(excesses, p[0].exp(), p[1]);

    let mut best: Option<numeric::Minimum> = None;
    for (s0, x0) in starts {
        let run = numeric::nelder_mead(objective, &[s0.ln(), x0], &[0.2, 0.1], 1e-11, 1e-9, 20_000);
        if let Ok(m) = run {
            if best.as_ref().is_none_or(|b| m.value < b.value) {
                best = Some(m);
            }
        }
    }
    let first = best.ok_or(Error::NonConvergence { what: "GPD likelihood maximization", iterations: 20_000 })?;
    if first.point[1] <= 0.0 {
        return Err(Error::NotHeavyTailed { xi: first.point[1] });
    }
    let m = match numeric::nelder_mead(objective, &first.point, &[0.01, 0.01], 1e-11, 1e-10, 20_000) {
        Ok(polished) if polished.value <= first.value => polished,
        _ => first,
    };
    if !m.value.is_finite() {
        return Err(Error::DegenerateLikelihood("likelihood is not finite at the optimum".into()));
    }
    let sigma = m.point[0].exp();
    let xi = m.point[1];
    if xi <= 0.0 {
        return Err(Error::NotHeavyTailed { xi });
    }

    let nll = |p: &[f64]| -gpd_loglik(excesses, p[0], p[1]);
    let h = numeric::hessian(nll, &[sigma, xi], &[1e-5 * sigma, 1e-5 * xi.abs().max(1e-3)]);
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if !(det > 0.0 && h[0][0] > 0.0) {
        return Err(Error::DegenerateLikelihood("observed information is not positive definite".into()));
    }
    let var_sigma = h[1][1] / det;
    let var_xi = h[0][0] / det;
    let xi_se = var_xi.sqrt();
    Ok(GpdFit {
        xi,
        sigma,
        xi_se,
        sigma_se: var_sigma.sqrt(),
        xi_ci: (xi - Z_975 * xi_se, xi + Z_975 * xi_se),
        loglik: -m.value,
        n: excesses.len(),
    })
}

/// Fits the semi-parametric tail above `u`, with `p_u` the empirical
/// exceedance rate.
pub fn fit_tail(sample: &Sample, u: f64) -> Result<FitResult> {
    let excesses = sample.excesses(u);
    if excesses.is_empty() {
        return Err(Error::NoExceedances { threshold: u });
    }
    let fit = fit_gpd_mle(&excesses)?;
    let p_u = excesses.len() as f64 / sample.len() as f64;
    Ok(FitResult {
        model: TailModel::new(u, p_u, fit.beta(), fit.sigma)?,
        xi_ci: fit.xi_ci,
        xi_se: fit.xi_se,
        loglik: fit.loglik,
        n_exceedances: excesses.len(),
        n_total: sample.len(),
    })
}
