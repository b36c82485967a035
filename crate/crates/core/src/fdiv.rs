//! Worst-case exceedance probabilities over f-divergence balls.
//!
//! For a reference with `p = P̂(X > x)` the optimal likelihood ratio is
//! two-level, `a` on `{X ≤ x}` and `b` on `{X > x}`, with `(1 − p)a + p b = 1`
//! and the divergence budget binding:
//!
//! ```text
//! T(b) = p f̃(b) + (1 − p) f̃((1 − b p)/(1 − p)) − δ = 0,   b ∈ (1, 1/p).
//! ```
//!
//! The worst-case probability is `b p`. When `T(1/p) ≤ 0` the whole mass can
//! be moved above `x` and the bound is 1.

use serde::{Deserialize, Serialize};

use crate::divergence::{DivergenceKind, DivergenceSpec};
use crate::error::{Error, Result};
use crate::evt::TailModel;
use crate::numeric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FDivMethod {
    Preasymptotic,
    AsymptoticInverse,
    AsymptoticEll,
}

/// Root of the two-level equation together with the implied optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BxSolution {
    pub b_x: f64,
    /// Likelihood ratio below `x`, `(1 − p b)/(1 − p)`.
    pub a_x: f64,
    /// Multipliers from `f̃'(b) − f̃'(a) = 1/λ₁`, `λ₂ = f̃'(a) λ₁`.
    pub lambda1: f64,
    pub lambda2: f64,
    pub saturated: bool,
    pub iterations: usize,
}

impl BxSolution {
    fn saturated(p_x: f64) -> Self {
        Self {
            b_x: 1.0 / p_x,
            a_x: 0.0,
            lambda1: f64::NAN,
            lambda2: f64::NAN,
            saturated: true,
            iterations: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FDivBoundResult {
    pub x: f64,
    pub p_x: f64,
    pub bound: f64,
    pub method: FDivMethod,
    pub saturated: bool,
    /// Present for the pre-asymptotic method only.
    pub solution: Option<BxSolution>,
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta >= 0.0) || delta.is_infinite() {
        return Err(Error::InvalidInput(format!("radius must be finite and ≥ 0, got {delta}")));
    }
    Ok(())
}

fn check_p(p_x: f64) -> Result<()> {
    if !(p_x > 0.0 && p_x < 1.0) {
        return Err(Error::InvalidInput(format!("reference probability must lie in (0, 1), got {p_x}")));
    }
    Ok(())
}

/// `T(y)` in generator units.
fn slack(spec: &DivergenceSpec, p: f64, delta: f64, y: f64) -> f64 {
    let a = ((1.0 - y * p) / (1.0 - p)).max(0.0);
    p * spec.f_tilted(y) + (1.0 - p) * spec.f_tilted(a) - delta
}

/// Solves the two-level equation for `b_x`. Radii of Rényi specs are mapped
/// to Hellinger radii first.
pub fn solve_bx(p_x: f64, spec: &DivergenceSpec, delta: f64) -> Result<BxSolution> {
    check_p(p_x)?;
    check_delta(delta)?;
    let g = spec.generator();
    let d = spec.generator_radius(delta);
    if d == 0.0 {
        return Ok(BxSolution {
            b_x: 1.0,
            a_x: 1.0,
            lambda1: f64::INFINITY,
            lambda2: 0.0,
            saturated: false,
            iterations: 0,
        });
    }
    if d >= g.radius_cap() {
        return Ok(BxSolution::saturated(p_x));
    }
    let top = 1.0 / p_x;
    if slack(&g, p_x, d, top) <= 0.0 {
        return Ok(BxSolution::saturated(p_x));
    }
    let root = numeric::bisect(|y| slack(&g, p_x, d, y), 1.0, top, 0.0, 200)?;
    let b = root.x;
    let a = ((1.0 - b * p_x) / (1.0 - p_x)).max(0.0);
    let lambda1 = 1.0 / (g.f_tilted_prime(b) - g.f_tilted_prime(a));
    Ok(BxSolution {
        b_x: b,
        a_x: a,
        lambda1,
        lambda2: g.f_tilted_prime(a) * lambda1,
        saturated: false,
        iterations: root.iterations,
    })
}

/// Root `ℓ ∈ (0, 1]` of `g(ℓ) = ℓ f̃*(0) + f̃(1 − ℓ) = δ` for kinds with a
/// finite `f̃*(0)`. `g` increases from 0 to the radius cap.
pub fn solve_ell(spec: &DivergenceSpec, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let g = spec.generator();
    let d = spec.generator_radius(delta);
    let (_, fs0) = g.boundary_values();
    if fs0.is_infinite() {
        return Err(Error::InfiniteConjugate(format!("{spec} has f̃*(0) = ∞")));
    }
    if d == 0.0 {
        return Ok(0.0);
    }
    if d >= g.radius_cap() {
        return Ok(1.0);
    }
    let root = numeric::bisect(|l| l * fs0 + g.f_tilted(1.0 - l) - d, 0.0, 1.0, 0.0, 200)?;
    Ok(root.x)
}

/// Asymptotic worst-case probability for a reference level with survival `p_x`:
/// `f̃←(δ/p) p` when `f̃*(0) = ∞`, the constant `ℓ` otherwise.
pub fn asymptotic_bound(p_x: f64, spec: &DivergenceSpec, delta: f64) -> Result<(f64, FDivMethod)> {
    check_delta(delta)?;
    let g = spec.generator();
    let d = spec.generator_radius(delta);
    let (_, fs0) = g.boundary_values();
    if fs0.is_finite() {
        return Ok((solve_ell(spec, delta)?, FDivMethod::AsymptoticEll));
    }
    if !(p_x > 0.0 && p_x <= 1.0) {
        return Err(Error::InvalidInput(format!("reference probability must lie in (0, 1], got {p_x}")));
    }
    let bound = (g.f_inverse_tail(d / p_x) * p_x).min(1.0);
    Ok((bound.max(p_x), FDivMethod::AsymptoticInverse))
}

/// Pre-asymptotic worst-case probability at level `x ≥ u` of a tail model.
pub fn preasymptotic_bound(model: &TailModel, x: f64, spec: &DivergenceSpec, delta: f64) -> Result<FDivBoundResult> {
    let p_x = model.survival(x)?;
    if p_x >= 1.0 {
        return Ok(FDivBoundResult {
            x,
            p_x,
            bound: 1.0,
            method: FDivMethod::Preasymptotic,
            saturated: true,
            solution: None,
        });
    }
    let sol = solve_bx(p_x, spec, delta)?;
    let bound = if sol.saturated { 1.0 } else { (sol.b_x * p_x).clamp(p_x, 1.0) };
    Ok(FDivBoundResult {
        x,
        p_x,
        bound,
        method: FDivMethod::Preasymptotic,
        saturated: sol.saturated,
        solution: Some(sol),
    })
}

/// Asymptotic worst-case probability at level `x ≥ u` of a tail model.
pub fn asymptotic_bound_at(model: &TailModel, x: f64, spec: &DivergenceSpec, delta: f64) -> Result<FDivBoundResult> {
    let p_x = model.survival(x)?;
    let (bound, method) = asymptotic_bound(p_x, spec, delta)?;
    Ok(FDivBoundResult { x, p_x, bound, method, saturated: bound >= 1.0, solution: None })
}

/// Closed-form description of the worst-case tail for a GPD-type reference
/// `p_x ≈ (x/(β̂σ̂))^(−β̂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum TailDescription {
    /// `(x/(βσ))^(−β)`.
    Power { beta: f64, sigma: f64 },
    /// `coefficient / log x`.
    Logarithmic { coefficient: f64 },
    /// A probability that does not decay.
    Constant { ell: f64 },
}

impl TailDescription {
    pub fn evaluate(&self, x: f64) -> f64 {
        let v = match *self {
            TailDescription::Power { beta, sigma } => (x / (beta * sigma)).powf(-beta),
            TailDescription::Logarithmic { coefficient } => coefficient / x.ln(),
            TailDescription::Constant { ell } => ell,
        };
        v.min(1.0)
    }

    /// Worst-case tail index, zero for non-power shapes.
    pub fn tail_index(&self) -> f64 {
        match *self {
            TailDescription::Power { beta, .. } => beta,
            _ => 0.0,
        }
    }
}

pub fn closed_form_params(spec: &DivergenceSpec, beta_hat: f64, sigma_hat: f64, delta: f64) -> Result<TailDescription> {
    use DivergenceKind::*;
    check_delta(delta)?;
    let d = spec.generator_radius(delta);
    Ok(match spec.generator().kind() {
        Kl | Jeffrey => TailDescription::Logarithmic { coefficient: delta / beta_hat },
        ChiSquared => TailDescription::Power {
            beta: beta_hat / 2.0,
            sigma: 2.0 * d.powf(1.0 / beta_hat) * sigma_hat,
        },
        Hellinger(a) => {
            let e = 1.0 / (beta_hat * (a - 1.0));
            TailDescription::Power {
                beta: (a - 1.0) / a * beta_hat,
                sigma: a * (a - 1.0).powf(e - 1.0) * d.powf(e) * sigma_hat,
            }
        }
        Triangle | JensenShannon => TailDescription::Constant { ell: solve_ell(spec, delta)? },
        Renyi(_) => unreachable!("generator() maps Rényi to Hellinger"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn specs() -> Vec<DivergenceSpec> {
        let mut v = DivergenceSpec::all_kinds(2.86).unwrap();
        v.push(DivergenceSpec::hellinger(2.0).unwrap());
        v
    }

    #[test]
    fn chi_squared_two_atom_algebra() {
        let sol = solve_bx(0.5, &DivergenceSpec::chi_squared(), 0.125).unwrap();
        assert!((sol.b_x - (1.0 + 0.125f64.sqrt())).abs() < 1e-12);
        assert!((sol.b_x * 0.5 - 0.676_776_695).abs() < 1e-8);
    }

    #[test]
    fn zero_radius_reduces_to_reference() {
        for s in specs() {
            let sol = solve_bx(0.2, &s, 0.0).unwrap();
            assert_eq!(sol.b_x, 1.0);
            let small = solve_bx(0.2, &s, 1e-10).unwrap();
            assert!(small.b_x - 1.0 < 1e-3, "{s}");
        }
    }

    #[test]
    fn triangle_saturation_threshold_by_scan() {
        let tri = DivergenceSpec::triangle();
        let p = 0.01;
        let threshold = p * tri.f_tilted(1.0 / p) + (1.0 - p) * tri.f_tilted(0.0);
        // feasibility of b on a fine grid, computed from the raw generator
        let feasible = |b: f64, delta: f64| {
            let a = (1.0 - b * p) / (1.0 - p);
            p * tri.f_raw(b).unwrap() + (1.0 - p) * tri.f_raw(a.max(0.0)).unwrap() <= delta
        };
        for delta in [1.9, threshold - 1e-3, threshold + 1e-3] {
            let sol = solve_bx(p, &tri, delta).unwrap();
            assert_eq!(sol.saturated, delta >= threshold, "δ={delta}");
            let top_feasible = feasible(1.0 / p, delta);
            assert_eq!(top_feasible, sol.saturated);
            if !sol.saturated {
                let n = 200_000;
                let best = (0..=n)
                    .map(|i| 1.0 + (1.0 / p - 1.0) * i as f64 / n as f64)
                    .filter(|&b| feasible(b, delta))
                    .fold(1.0, f64::max);
                assert!((best - sol.b_x).abs() < 1e-3, "{best} vs {}", sol.b_x);
            }
        }
    }

    #[test]
    fn cap_saturates() {
        let sol = solve_bx(0.3, &DivergenceSpec::triangle(), 2.0).unwrap();
        assert!(sol.saturated);
        let sol = solve_bx(0.3, &DivergenceSpec::jensen_shannon(), 3.0).unwrap();
        assert!(sol.saturated);
    }

    #[test]
    fn residual_and_feasibility() {
        for s in specs() {
            for p in [0.4, 0.05, 1e-3, 1e-6] {
                for delta in [0.01, 0.3, 1.2] {
                    let g = s.generator();
                    let d = s.generator_radius(delta);
                    let sol = solve_bx(p, &s, delta).unwrap();
                    if sol.saturated {
                        assert!(slack(&g, p, d, 1.0 / p) <= 0.0 || d >= g.radius_cap());
                        continue;
                    }
                    assert!(sol.b_x > 1.0 && sol.b_x < 1.0 / p);
                    assert!(slack(&g, p, d, sol.b_x).abs() <= 1e-10 * d.max(1.0), "{s} p={p} δ={delta}");
                    assert!(sol.a_x >= 0.0 && sol.a_x < 1.0);
                    assert!(((1.0 - p) * sol.a_x + p * sol.b_x - 1.0).abs() < 1e-12);
                    let used = (1.0 - p) * g.f_tilted(sol.a_x) + p * g.f_tilted(sol.b_x);
                    assert!((used - d).abs() < 1e-9 * d.max(1.0));
                    // the untilted generator gives the same constraint value
                    let raw = (1.0 - p) * g.raw(sol.a_x) + p * g.raw(sol.b_x);
                    assert!((raw - used).abs() < 1e-9 * d.max(1.0));
                    assert!(sol.lambda1 > 0.0);
                }
            }
        }
    }

    #[test]
    fn monotone_in_delta() {
        for s in specs() {
            let mut prev = 0.0;
            for i in 1..40 {
                let delta = 0.05 * i as f64;
                let sol = solve_bx(0.01, &s, delta).unwrap();
                let bound = if sol.saturated { 1.0 } else { sol.b_x * 0.01 };
                assert!(bound >= prev, "{s} at δ={delta}");
                if !sol.saturated && prev < 1.0 {
                    assert!(bound > prev);
                }
                prev = bound;
            }
        }
    }

    #[test]
    fn ell_examples() {
        let tri = DivergenceSpec::triangle();
        for delta in [0.1, 1.0, 1.9] {
            let l = solve_ell(&tri, delta).unwrap();
            assert!((l - 2.0 * delta / (delta + 2.0)).abs() < 1e-12);
        }
        let js = DivergenceSpec::jensen_shannon();
        let l = solve_ell(&js, LN_2).unwrap();
        let g = |l: f64| l * LN_2 + (1.0 - l) * (1.0 - l).ln() - (2.0 - l) * ((2.0 - l) / 2.0).ln();
        // fine-grid scan of the same equation
        let scan = (0..=1_000_000)
            .map(|i| i as f64 / 1e6)
            .find(|&l| g(l) >= LN_2)
            .unwrap();
        assert!((l - scan).abs() < 2e-6);
        assert!((l - 0.705).abs() < 0.01, "{l}");
        assert!(solve_ell(&tri, 1e-12).unwrap() < 1e-11);
        assert!(matches!(solve_ell(&DivergenceSpec::kl(), 1.0), Err(Error::InfiniteConjugate(_))));
    }

    #[test]
    fn asymptotic_examples() {
        let (b, m) = asymptotic_bound(0.3, &DivergenceSpec::triangle(), 1.0).unwrap();
        assert_eq!(m, FDivMethod::AsymptoticEll);
        assert!((b - 2.0 / 3.0).abs() < 1e-12);
        let p = 1e-10;
        let (b, _) = asymptotic_bound(p, &DivergenceSpec::chi_squared(), 0.5).unwrap();
        assert!((b - (1.0 + (0.5 / p).sqrt()) * p).abs() < 1e-20);
    }

    #[test]
    fn chi_squared_asymptote_matches_closed_form() {
        let model = TailModel::new(0.0, 1.0, 2.0, 1.0).unwrap();
        let spec = DivergenceSpec::chi_squared();
        let desc = closed_form_params(&spec, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(desc, TailDescription::Power { beta: 1.0, sigma: 2.0 });
        let x = 1e7;
        let asym = asymptotic_bound_at(&model, x, &spec, 1.0).unwrap().bound;
        assert!((asym / desc.evaluate(x) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn kl_asymptote_loose() {
        let model = TailModel::new(0.0, 1.0, 1.0, 1.0).unwrap();
        let x = 10f64.exp();
        let b = asymptotic_bound_at(&model, x, &DivergenceSpec::kl(), 1.0).unwrap().bound;
        assert!((b / 0.1 - 1.0).abs() < 0.5, "{b}");
    }

    #[test]
    fn closed_form_rows() {
        let h2 = DivergenceSpec::hellinger(2.0).unwrap();
        assert_eq!(closed_form_params(&h2, 2.0, 1.0, 1.0).unwrap(), TailDescription::Power { beta: 1.0, sigma: 2.0 });
        let h = DivergenceSpec::hellinger(2.86).unwrap();
        let d = closed_form_params(&h, 2.03, 7.0, 0.01).unwrap();
        assert!((d.tail_index() - 1.86 / 2.86 * 2.03).abs() < 1e-12);
        assert!((d.tail_index() - 1.3202).abs() < 1e-4);
        let r = DivergenceSpec::renyi(2.0).unwrap();
        match closed_form_params(&r, 2.0, 1.0, LN_2).unwrap() {
            TailDescription::Power { beta, sigma } => {
                assert!((beta - 1.0).abs() < 1e-15);
                assert!((sigma - 2.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        match closed_form_params(&DivergenceSpec::kl(), 2.0, 1.0, 0.5).unwrap() {
            TailDescription::Logarithmic { coefficient } => assert_eq!(coefficient, 0.25),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hellinger_preasymptotic_approaches_asymptote() {
        let model = TailModel::new(0.0, 1.0, 2.0, 1.0).unwrap();
        let spec = DivergenceSpec::hellinger(3.0).unwrap();
        let x = model.level_for_survival(1e-10);
        let pre = preasymptotic_bound(&model, x, &spec, 0.5).unwrap().bound;
        let asym = asymptotic_bound_at(&model, x, &spec, 0.5).unwrap().bound;
        assert!((pre / asym - 1.0).abs() < 0.02, "{pre} {asym}");
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(solve_bx(0.0, &DivergenceSpec::kl(), 1.0).is_err());
        assert!(solve_bx(1.0, &DivergenceSpec::kl(), 1.0).is_err());
        assert!(solve_bx(0.5, &DivergenceSpec::kl(), -1.0).is_err());
    }
}
