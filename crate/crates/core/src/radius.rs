//! Data-driven ambiguity radii and the Hellinger order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::evt::TailModel;
use crate::numeric::{self, QuadTol};
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusMethod {
    WassersteinEmpirical,
    KnnHellinger,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub delta: f64,
    pub method: RadiusMethod,
    pub s: Option<f64>,
    pub alpha: Option<f64>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub seed: Option<u64>,
    pub replicates: Option<usize>,
}

/// Which pair of distributions the Wasserstein radius compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WassersteinDomain {
    /// Spliced model (empirical below `u`, fitted tail above) against the
    /// full empirical distribution. Only the part above `u` differs.
    #[default]
    Unconditional,
    /// Fitted exceedance distribution against the empirical exceedances.
    Conditional,
}

/// Distorted Wasserstein distance between the fitted and the empirical
/// distribution, computed between consecutive order statistics.
///
/// On each interval the empirical survival is a constant `c`; the model
/// survival crosses it at most once, so the integral of `|S − c| s y^(s−1)`
/// splits at the crossing into two signed pieces. The piece beyond the
/// largest observation is the fitted tail moment.
pub fn estimate_delta_wasserstein(
    model: &TailModel,
    sample: &Sample,
    s: f64,
    domain: WassersteinDomain,
) -> Result<RadiusEstimate> {
    if !(s >= 1.0) {
        return Err(Error::InvalidInput(format!("distortion power must be ≥ 1, got {s}")));
    }
    if s >= model.beta {
        return Err(Error::DivergentTail { s, beta: model.beta });
    }
    let exc = sample.exceedances(model.u);
    if exc.is_empty() {
        return Err(Error::NoExceedances { threshold: model.u });
    }
    let (model, weight) = match domain {
        WassersteinDomain::Unconditional => (*model, 1.0 / sample.len() as f64),
        WassersteinDomain::Conditional => (
            TailModel { p_u: 1.0, ..*model },
            1.0 / exc.len() as f64,
        ),
    };
    let tol = QuadTol { abs: 0.0, rel: 1e-14, max_depth: 30 };
    let moment = |a: f64, b: f64| numeric::integrate(|y| model.survival_unchecked(y) * s * y.powf(s - 1.0), a, b, tol);

    let mut delta = 0.0;
    let mut lo = model.u;
    let mut above = exc.len();
    let mut i = 0;
    while i < exc.len() {
        let hi = exc[i];
        let c = above as f64 * weight;
        let cross = model.level_for_survival(c).clamp(lo, hi);
        // S > c on [lo, cross), S < c on (cross, hi]
        delta += moment(lo, cross) - c * (cross.powf(s) - lo.powf(s));
        delta += c * (hi.powf(s) - cross.powf(s)) - moment(cross, hi);
        while i < exc.len() && exc[i] == hi {
            i += 1;
            above -= 1;
        }
        lo = hi;
    }
    delta += model.tail_moment(lo, s)?;
    Ok(RadiusEstimate {
        delta: delta.max(0.0),
        method: RadiusMethod::WassersteinEmpirical,
        s: Some(s),
        alpha: None,
        k: None,
        m: None,
        seed: None,
        replicates: None,
    })
}

/// Hellinger order matching the upper end of the shape interval:
/// `α = (1 + εβ̂)/(εβ̂)`.
pub fn select_alpha(beta_hat: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput(format!("interval half-width must be positive, got {epsilon}")));
    }
    if !(beta_hat > 0.0) {
        return Err(Error::InvalidInput(format!("tail index must be positive, got {beta_hat}")));
    }
    let eb = epsilon * beta_hat;
    Ok((1.0 + eb) / eb)
}

/// Default neighbour count, `⌈√n⌉`.
pub fn default_k(n: usize) -> usize {
    (n as f64).sqrt().ceil() as usize
}

/// Bias correction `Γ(k)² / (Γ(k − α + 1) Γ(k + α − 1))`.
pub fn knn_bias_correction(k: usize, alpha: f64) -> f64 {
    let k = k as f64;
    (2.0 * ln_gamma(k) - ln_gamma(k - alpha + 1.0) - ln_gamma(k + alpha - 1.0)).exp()
}

/// k-th nearest distance from `v` to the sorted `pool`, skipping one copy of
/// `v` itself at index `own` when given.
fn kth_distance(pool: &[f64], v: f64, k: usize, own: Option<usize>) -> f64 {
    let pos = pool.partition_point(|p| *p < v);
    let (mut left, mut right) = match own {
        Some(i) => (i as isize - 1, i + 1),
        None => (pos as isize - 1, pos),
    };
    let mut d = 0.0;
    for _ in 0..k {
        let dl = if left >= 0 { v - pool[left as usize] } else { f64::INFINITY };
        let dr = if right < pool.len() { pool[right] - v } else { f64::INFINITY };
        if dl <= dr {
            d = dl;
            left -= 1;
        } else {
            d = dr;
            right += 1;
        }
    }
    d
}

/// Hellinger(α) divergence `(∫ p^α q^(1−α) − 1)/(α − 1)` between densities
/// `p` (of `xs`) and `q` (of `ys`), estimated from k-NN distances:
///
/// ```text
/// D̂ = (1/n) Σ_i [ (n − 1) ρ_k(x_i) / (m ν_k(x_i)) ]^(1−α) · B_{k,α}.
/// ```
///
/// Negative estimates are clamped at 0. Both inputs must be sorted.
pub fn knn_hellinger(xs: &[f64], ys: &[f64], alpha: f64, k: usize) -> Result<f64> {
    let d = knn_power_mean(xs, ys, alpha, k)?;
    Ok(((d - 1.0) / (alpha - 1.0)).max(0.0))
}

/// The plug-in estimate `D̂` of `∫ p^α q^(1−α)`.
fn knn_power_mean(xs: &[f64], ys: &[f64], alpha: f64, k: usize) -> Result<f64> {
    let (n, m) = (xs.len(), ys.len());
    if !(alpha > 1.0) {
        return Err(Error::InvalidInput(format!("order α must exceed 1, got {alpha}")));
    }
    if k == 0 || k >= n || k > m {
        return Err(Error::InvalidInput(format!("need 1 ≤ k < n and k ≤ m, got k={k}, n={n}, m={m}")));
    }
    if k as f64 - alpha + 1.0 <= 0.0 {
        return Err(Error::InvalidInput(format!("k = {k} too small for α = {alpha}")));
    }
    let terms: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let rho = kth_distance(xs, xs[i], k, Some(i));
            let nu = kth_distance(ys, xs[i], k, None);
            ((n - 1) as f64 * rho / (m as f64 * nu)).powf(1.0 - alpha)
        })
        .collect();
    if terms.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidInput("zero nearest-neighbour distance".into()));
    }
    Ok(terms.iter().sum::<f64>() / n as f64 * knn_bias_correction(k, alpha))
}

/// Draws `m` values from the fitted exceedance distribution by inverse CDF.
pub fn synthetic_exceedances(model: &TailModel, m: usize, seed: u64) -> Vec<f64> {
    synthetic_stream(model, m, seed, 0)
}

/// As [`synthetic_exceedances`], from an independent ChaCha stream.
fn synthetic_stream(model: &TailModel, m: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let scale = model.beta * model.sigma;
    let mut ys: Vec<f64> = (0..m)
        .map(|_| {
            let v: f64 = 1.0 - rng.gen::<f64>();
            model.u + scale * (-v.ln() / model.beta).exp_m1()
        })
        .collect();
    ys.sort_by(f64::total_cmp);
    ys
}

/// k-NN estimate of the Hellinger(α) radius between the empirical and the
/// fitted tail from a single synthetic sample.
///
/// The exceedances play the role of the sample from `p`; `m` synthetic
/// draws from the fitted exceedance distribution that of `q`. The
/// divergence between the conditional laws is scaled by `p_u`, since the
/// spliced model and the empirical distribution agree below `u`. Tied
/// observations get a seeded uniform jitter of size `1e−9` times the data
/// range.
pub fn estimate_delta_knn_hellinger(
    model: &TailModel,
    sample: &Sample,
    alpha: f64,
    k: usize,
    m: usize,
    seed: u64,
) -> Result<RadiusEstimate> {
    estimate_delta_knn_hellinger_averaged(model, sample, alpha, k, m, seed, 1)
}

/// Same estimate with `D̂` averaged over `replicates` independent synthetic
/// samples (ChaCha streams `0..replicates` of `seed`).
pub fn estimate_delta_knn_hellinger_averaged(
    model: &TailModel,
    sample: &Sample,
    alpha: f64,
    k: usize,
    m: usize,
    seed: u64,
    replicates: usize,
) -> Result<RadiusEstimate> {
    if replicates == 0 {
        return Err(Error::InvalidInput("need at least one replicate".into()));
    }
    let mut xs = sample.exceedances(model.u).to_vec();
    if xs.is_empty() {
        return Err(Error::NoExceedances { threshold: model.u });
    }
    if m < xs.len() {
        return Err(Error::InvalidInput(format!("synthetic size m = {m} is below n = {}", xs.len())));
    }
    if xs.windows(2).any(|w| w[0] == w[1]) {
        let scale = (xs[xs.len() - 1] - xs[0]).max(xs[xs.len() - 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        for x in &mut xs {
            *x += 1e-9 * scale * (2.0 * rng.gen::<f64>() - 1.0);
        }
        xs.sort_by(f64::total_cmp);
    }
    let mut total = 0.0;
    for r in 0..replicates {
        let ys = synthetic_stream(model, m, seed, r as u64);
        total += knn_power_mean(&xs, &ys, alpha, k)?;
    }
    let d = total / replicates as f64;
    let conditional = ((d - 1.0) / (alpha - 1.0)).max(0.0);
    Ok(RadiusEstimate {
        delta: model.p_u * conditional,
        replicates: Some(replicates),
        method: RadiusMethod::KnnHellinger,
        s: None,
        alpha: Some(alpha),
        k: Some(k),
        m: Some(m),
        seed: Some(seed),
    })
}
