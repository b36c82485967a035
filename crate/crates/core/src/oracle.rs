//! Brute-force worst-case solvers on finite supports.
//!
//! These are deliberately naive (grid scans, greedy transport, exhaustive
//! enumeration) and share no code with the analytic solvers, so agreement
//! between the two is meaningful.

use serde::{Deserialize, Serialize};

use crate::divergence::DivergenceSpec;
use crate::error::{Error, Result};
use crate::evt::TailModel;

/// Finitely supported distribution with strictly ascending atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    atoms: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != probs.len() {
            return Err(Error::InvalidInput("atoms and masses must be nonempty and of equal length".into()));
        }
        if atoms.iter().any(|a| !a.is_finite()) || atoms.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput("atoms must be finite and strictly ascending".into()));
        }
        if probs.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::InvalidInput("masses must be nonnegative".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("masses sum to {total}, not 1")));
        }
        Ok(Self { atoms, probs })
    }

    /// Like [`DiscreteDistribution::new`] but rescales the masses to sum to 1.
    pub fn normalized(atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        let total: f64 = probs.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidInput("masses must have a positive sum".into()));
        }
        Self::new(atoms, probs.into_iter().map(|p| p / total).collect())
    }

    /// Equal weights on the given values, ties merged.
    pub fn empirical(values: &[f64]) -> Result<Self> {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let w = 1.0 / v.len() as f64;
        let mut atoms: Vec<f64> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for y in v {
            if atoms.last() == Some(&y) {
                *counts.last_mut().unwrap() += 1;
            } else {
                atoms.push(y);
                counts.push(1);
            }
        }
        Self::normalized(atoms, counts.into_iter().map(|c| c as f64 * w).collect())
    }

    /// `n` equally weighted atoms at the midpoint quantiles
    /// `F⁻¹((i + ½)/n)` of the tail model (ties at `u` merged).
    pub fn quantile_discretization(model: &TailModel, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("need at least one atom".into()));
        }
        let levels: Vec<f64> = (0..n)
            .map(|i| model.level_for_survival(1.0 - (i as f64 + 0.5) / n as f64))
            .collect();
        Self::empirical(&levels)
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Mass strictly above `x`.
    pub fn mass_above(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .zip(&self.probs)
            .filter(|(a, _)| **a > x)
            .map(|(_, p)| p)
            .sum()
    }
}

/// Largest mass above `x` reachable inside the f-divergence ball, scanning
/// the two-block family `{X ≤ x}`, `{X > x}`.
///
/// The moved mass `m` runs over a uniform grid on `[p, 1]`; the frontier
/// between the last feasible and first infeasible grid point is refined by
/// bisection.
pub fn fdiv_worstcase_scan(
    reference: &DiscreteDistribution,
    x: f64,
    spec: &DivergenceSpec,
    delta: f64,
    grid_size: usize,
) -> f64 {
    let p = reference.mass_above(x);
    if p <= 0.0 || p >= 1.0 {
        return p;
    }
    let radius = spec.generator_radius(delta);
    if radius <= 0.0 {
        return p;
    }
    let feasible = |m: f64| -> bool {
        spec.divergence_discrete(&[1.0 - p, p], &[1.0 - m, m])
            .map(|d| d.value() <= radius)
            .unwrap_or(false)
    };
    let mut last = p;
    let mut first_bad = None;
    for i in 1..=grid_size {
        let m = p + (1.0 - p) * i as f64 / grid_size as f64;
        if feasible(m) {
            last = m;
        } else {
            first_bad = Some(m);
            break;
        }
    }
    let Some(mut hi) = first_bad else { return 1.0 };
    let mut lo = last;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Exhaustive search over all distributions on the reference atoms whose
/// masses lie on a simplex grid of step `resolution` (at most 4 atoms).
pub fn fdiv_worstcase_exhaustive(
    reference: &DiscreteDistribution,
    x: f64,
    spec: &DivergenceSpec,
    delta: f64,
    resolution: f64,
) -> Result<f64> {
    let k = reference.atoms().len();
    if k > 4 {
        return Err(Error::InvalidInput("exhaustive search supports at most 4 atoms".into()));
    }
    let steps = (1.0 / resolution).round() as usize;
    let radius = spec.generator_radius(delta);
    let mut best = reference.mass_above(x);
    let mut counts = vec![0usize; k];
    fn visit(
        i: usize,
        left: usize,
        counts: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if i + 1 == counts.len() {
            counts[i] = left;
            f(counts);
            return;
        }
        for c in 0..=left {
            counts[i] = c;
            visit(i + 1, left - c, counts, f);
        }
    }
    visit(0, steps, &mut counts, &mut |c| {
        let q: Vec<f64> = c.iter().map(|&n| n as f64 / steps as f64).collect();
        if let Ok(d) = spec.divergence_discrete(reference.probs(), &q) {
            if d.value() <= radius {
                let above: f64 = reference
                    .atoms()
                    .iter()
                    .zip(&q)
                    .filter(|(a, _)| **a > x)
                    .map(|(_, m)| m)
                    .sum();
                best = best.max(above);
            }
        }
    });
    Ok(best)
}

/// Result of the greedy transport: the worst-case mass at or above `x` and
/// the transported distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyTransport {
    pub probability: f64,
    pub spent: f64,
    pub moved: DiscreteDistribution,
}

/// Moves mass from atoms below `x` up to `x`, nearest atoms first, until the
/// budget `δ` runs out. Cost per unit mass is `x^s − y^s`.
pub fn wasserstein_worstcase_greedy(reference: &DiscreteDistribution, x: f64, s: f64, delta: f64) -> GreedyTransport {
    let xs = x.powf(s);
    let mut budget = delta;
    let mut remaining = reference.probs().to_vec();
    let mut moved_to_x = 0.0;
    for (i, &y) in reference.atoms().iter().enumerate().rev() {
        if y >= x {
            continue;
        }
        if budget <= 0.0 {
            break;
        }
        let cost = xs - y.powf(s);
        let take = remaining[i].min(budget / cost);
        remaining[i] -= take;
        moved_to_x += take;
        budget -= take * cost;
    }
    let already: f64 = reference
        .atoms()
        .iter()
        .zip(reference.probs())
        .filter(|(a, _)| **a >= x)
        .map(|(_, p)| p)
        .sum();

    let mut pairs: Vec<(f64, f64)> = reference.atoms().iter().copied().zip(remaining).collect();
    match pairs.iter_mut().find(|(a, _)| *a == x) {
        Some(slot) => slot.1 += moved_to_x,
        None => {
            pairs.push((x, moved_to_x));
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
    }
    let (atoms, probs): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    GreedyTransport {
        probability: (already + moved_to_x).min(1.0),
        spent: delta - budget.max(0.0),
        moved: DiscreteDistribution::normalized(atoms, probs).expect("transport preserves mass"),
    }
}

/// Exhaustive search over per-atom moved masses on a grid of step
/// `resolution` (at most 6 atoms). Moved mass goes to `x`; the plan's cost is
/// the sum of `mass · (x^s − y^s)`.
pub fn wasserstein_worstcase_exhaustive(
    reference: &DiscreteDistribution,
    x: f64,
    s: f64,
    delta: f64,
    resolution: f64,
) -> Result<f64> {
    if reference.atoms().len() > 6 {
        return Err(Error::InvalidInput("exhaustive search supports at most 6 atoms".into()));
    }
    let xs = x.powf(s);
    let below: Vec<(f64, f64)> = reference
        .atoms()
        .iter()
        .zip(reference.probs())
        .filter(|(a, _)| **a < x)
        .map(|(a, p)| (xs - a.powf(s), *p))
        .collect();
    let base = 1.0 - below.iter().map(|b| b.1).sum::<f64>();
    fn search(i: usize, below: &[(f64, f64)], budget: f64, moved: f64, res: f64, best: &mut f64) {
        if i == below.len() {
            *best = best.max(moved);
            return;
        }
        let (cost, mass) = below[i];
        let mut k = 0usize;
        loop {
            let m = (k as f64 * res).min(mass);
            let c = m * cost;
            if c > budget + 1e-15 {
                break;
            }
            search(i + 1, below, budget - c, moved + m, res, best);
            if m >= mass {
                break;
            }
            k += 1;
        }
    }
    let mut best = 0.0;
    search(0, &below, delta, 0.0, resolution, &mut best);
    Ok((base + best).min(1.0))
}

/// Exact distorted Wasserstein distance between two discrete distributions:
/// the sum over CDF steps of `|F − G| (y_{i+1}^s − y_i^s)`.
pub fn wasserstein_distance_discrete(p: &DiscreteDistribution, q: &DiscreteDistribution, s: f64) -> f64 {
    let mut events: Vec<(f64, f64, f64)> = p
        .atoms()
        .iter()
        .zip(p.probs())
        .map(|(a, m)| (*a, *m, 0.0))
        .chain(q.atoms().iter().zip(q.probs()).map(|(a, m)| (*a, 0.0, *m)))
        .collect();
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mut f, mut g) = (0.0, 0.0);
    let mut total = 0.0;
    for w in 0..events.len() {
        f += events[w].1;
        g += events[w].2;
        if let Some(next) = events.get(w + 1) {
            total += (f - g).abs() * (next.0.powf(s) - events[w].0.powf(s));
        }
    }
    total
}
