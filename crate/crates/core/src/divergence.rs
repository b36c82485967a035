//! The f-divergence family.
//!
//! Each kind carries its generator `f` (convex, `f(1) = 0`), the derivative
//! `f'`, and the tilted generator `f̃(y) = f(y) − f'(1)(y − 1)`, which induces
//! the same divergence but satisfies `f̃'(1) = 0` and is nonnegative and
//! increasing on `[1, ∞)`. Boundary and asymptotic computations all use `f̃`.
//!
//! | kind | f(y) | f̃(0) | f̃*(0) |
//! |------|------|------|-------|
//! | KL | y log y | 1 | ∞ |
//! | Hellinger(α) | (y^α − 1)/(α − 1) | 1 | ∞ |
//! | χ² | y² − 1 | 1 | ∞ |
//! | triangle | (y − 1)²/(y + 1) | 1 | 1 |
//! | Jeffrey | (y − 1) log y | ∞ | ∞ |
//! | Jensen–Shannon | y log y − (1 + y) log((1 + y)/2) | log 2 | log 2 |
//!
//! Rényi(α) balls are handled as Hellinger(α) balls of transformed radius,
//! see [`renyi_radius`].

use std::f64::consts::{E, LN_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;
use crate::special::lambert_w;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "alpha", rename_all = "snake_case")]
pub enum DivergenceKind {
    Kl,
    Hellinger(f64),
    ChiSquared,
    Triangle,
    Jeffrey,
    JensenShannon,
    Renyi(f64),
}

/// A validated divergence kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DivergenceKind", into = "DivergenceKind")]
pub struct DivergenceSpec {
    kind: DivergenceKind,
}

impl TryFrom<DivergenceKind> for DivergenceSpec {
    type Error = Error;

    fn try_from(kind: DivergenceKind) -> Result<Self> {
        Self::new(kind)
    }
}

impl From<DivergenceSpec> for DivergenceKind {
    fn from(spec: DivergenceSpec) -> Self {
        spec.kind
    }
}

/// Nonnegative divergence value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DivergenceValue(f64);

impl DivergenceValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Hellinger(α) radius equivalent to a Rényi(α) radius `δ`:
/// `(exp((α − 1)δ) − 1)/(α − 1)`.
pub fn renyi_radius(alpha: f64, delta: f64) -> f64 {
    ((alpha - 1.0) * delta).exp_m1() / (alpha - 1.0)
}

impl DivergenceSpec {
    pub fn new(kind: DivergenceKind) -> Result<Self> {
        match kind {
            DivergenceKind::Hellinger(a) | DivergenceKind::Renyi(a) if !(a > 1.0 && a.is_finite()) => {
                Err(Error::InvalidInput(format!("order α must exceed 1, got {a}")))
            }
            _ => Ok(Self { kind }),
        }
    }

    pub fn kl() -> Self {
        Self { kind: DivergenceKind::Kl }
    }

    pub fn chi_squared() -> Self {
        Self { kind: DivergenceKind::ChiSquared }
    }

    pub fn triangle() -> Self {
        Self { kind: DivergenceKind::Triangle }
    }

    pub fn jeffrey() -> Self {
        Self { kind: DivergenceKind::Jeffrey }
    }

    pub fn jensen_shannon() -> Self {
        Self { kind: DivergenceKind::JensenShannon }
    }

    pub fn hellinger(alpha: f64) -> Result<Self> {
        Self::new(DivergenceKind::Hellinger(alpha))
    }

    pub fn renyi(alpha: f64) -> Result<Self> {
        Self::new(DivergenceKind::Renyi(alpha))
    }

    /// Every kind with a representative order, for tests and sweeps.
    pub fn all_kinds(alpha: f64) -> Result<Vec<Self>> {
        Ok(vec![
            Self::kl(),
            Self::hellinger(alpha)?,
            Self::chi_squared(),
            Self::triangle(),
            Self::jeffrey(),
            Self::jensen_shannon(),
            Self::renyi(alpha)?,
        ])
    }

    pub fn kind(&self) -> DivergenceKind {
        self.kind
    }

    pub fn alpha(&self) -> Option<f64> {
        match self.kind {
            DivergenceKind::Hellinger(a) | DivergenceKind::Renyi(a) => Some(a),
            _ => None,
        }
    }

    /// The spec whose generator is actually used: Rényi maps to Hellinger.
    pub fn generator(&self) -> Self {
        match self.kind {
            DivergenceKind::Renyi(a) => Self { kind: DivergenceKind::Hellinger(a) },
            _ => *self,
        }
    }

    /// Radius in generator units: Rényi radii go through [`renyi_radius`].
    pub fn generator_radius(&self, delta: f64) -> f64 {
        match self.kind {
            DivergenceKind::Renyi(a) => renyi_radius(a, delta),
            _ => delta,
        }
    }

    /// Generator `f(y)` for `y ≥ 0`, with `f(0)` the limit from the right.
    pub fn f_raw(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(Error::InvalidInput(format!("generator argument must be ≥ 0, got {y}")));
        }
        Ok(self.raw(y))
    }

    pub(crate) fn raw(&self, y: f64) -> f64 {
        use DivergenceKind::*;
        match self.generator().kind {
            Kl => xlogx(y),
            Hellinger(a) => (y.powf(a) - 1.0) / (a - 1.0),
            ChiSquared => y * y - 1.0,
            Triangle => (y - 1.0).powi(2) / (y + 1.0),
            Jeffrey => {
                if y == 0.0 {
                    f64::INFINITY
                } else {
                    (y - 1.0) * y.ln()
                }
            }
            JensenShannon => js(y),
            Renyi(_) => unreachable!("generator() maps Rényi to Hellinger"),
        }
    }

    /// `f'(y)` for `y > 0`.
    pub fn f_prime(&self, y: f64) -> f64 {
        use DivergenceKind::*;
        match self.generator().kind {
            Kl => y.ln() + 1.0,
            Hellinger(a) => a * y.powf(a - 1.0) / (a - 1.0),
            ChiSquared => 2.0 * y,
            Triangle => (y - 1.0) * (y + 3.0) / (y + 1.0).powi(2),
            Jeffrey => y.ln() + 1.0 - 1.0 / y,
            JensenShannon => (2.0 * y / (1.0 + y)).ln(),
            Renyi(_) => unreachable!(),
        }
    }

    /// `f'(1)`, the slope removed by the tilt.
    pub fn slope_at_one(&self) -> f64 {
        use DivergenceKind::*;
        match self.generator().kind {
            Kl => 1.0,
            Hellinger(a) => a / (a - 1.0),
            ChiSquared => 2.0,
            Triangle | Jeffrey | JensenShannon => 0.0,
            Renyi(_) => unreachable!(),
        }
    }

    /// Tilted generator `f̃(y) = f(y) − f'(1)(y − 1)` for `y ≥ 0`.
    pub fn f_tilted(&self, y: f64) -> f64 {
        use DivergenceKind::*;
        match self.generator().kind {
            Kl => {
                if y == 0.0 {
                    1.0
                } else {
                    y * y.ln() - (y - 1.0)
                }
            }
            Hellinger(a) => {
                if y == 0.0 {
                    1.0
                } else {
                    ((a * y.ln()).exp_m1() - a * (y - 1.0)) / (a - 1.0)
                }
            }
            ChiSquared => (y - 1.0).powi(2),
            Triangle | Jeffrey | JensenShannon => self.raw(y),
            Renyi(_) => unreachable!(),
        }
    }

    /// `f̃'(y)` for `y > 0`; `f̃'(0⁺)` may be `−∞`.
    pub fn f_tilted_prime(&self, y: f64) -> f64 {
        self.f_prime(y) - self.slope_at_one()
    }

    /// `*`-conjugate of the raw generator, `f*(y) = y f(1/y)`.
    pub fn f_conjugate(&self, y: f64) -> f64 {
        use DivergenceKind::*;
        if y == 0.0 {
            return match self.generator().kind {
                Kl | Hellinger(_) | ChiSquared | Jeffrey => f64::INFINITY,
                Triangle => 1.0,
                JensenShannon => LN_2,
                Renyi(_) => unreachable!(),
            };
        }
        y * self.raw(1.0 / y)
    }

    /// `(f̃(0), f̃*(0))` where `f̃*(0) = lim_{y→∞} f̃(y)/y`.
    pub fn boundary_values(&self) -> (f64, f64) {
        use DivergenceKind::*;
        match self.generator().kind {
            Kl | Hellinger(_) | ChiSquared => (1.0, f64::INFINITY),
            Triangle => (1.0, 1.0),
            Jeffrey => (f64::INFINITY, f64::INFINITY),
            JensenShannon => (LN_2, LN_2),
            Renyi(_) => unreachable!(),
        }
    }

    /// `f̃(0) + f̃*(0)`, the largest attainable divergence in generator units.
    pub fn radius_cap(&self) -> f64 {
        let (f0, fs0) = self.boundary_values();
        f0 + fs0
    }

    /// Largest meaningful radius in the spec's own units (Rényi: `∞`).
    pub fn delta_cap(&self) -> f64 {
        match self.kind {
            DivergenceKind::Renyi(_) => f64::INFINITY,
            _ => self.radius_cap(),
        }
    }

    /// Generalized inverse `inf { z ≥ 1 : f̃(z) ≥ t }`.
    ///
    /// Closed forms for χ² (and Hellinger of order 2, whose tilt is the same
    /// function) and for KL via Lambert W; bracketed bisection otherwise.
    pub fn f_inverse_tail(&self, t: f64) -> f64 {
        use DivergenceKind::*;
        if !(t > 0.0) {
            return 1.0;
        }
        if t.is_infinite() {
            return f64::INFINITY;
        }
        match self.generator().kind {
            ChiSquared => return 1.0 + t.sqrt(),
            Hellinger(2.0) => return 1.0 + t.sqrt(),
            // y (log y − 1) = t − 1  ⇒  y = e · exp(W((t − 1)/e))
            Kl if t > 1.0 => return E * lambert_w((t - 1.0) / E).exp(),
            _ => {}
        }
        self.bisect_inverse(t, |y| self.f_tilted(y))
    }

    /// Generalized inverse of the raw generator on `[1, ∞)`; the Hellinger
    /// closed form `(1 + (α − 1)t)^(1/α)` and KL `t / W(t)` are used where
    /// they apply.
    pub fn f_inverse_raw_tail(&self, t: f64) -> f64 {
        use DivergenceKind::*;
        if !(t > 0.0) {
            return 1.0;
        }
        match self.generator().kind {
            Hellinger(a) => (1.0 + (a - 1.0) * t).powf(1.0 / a),
            ChiSquared => (1.0 + t).sqrt(),
            Kl => t / lambert_w(t),
            _ => self.bisect_inverse(t, |y| self.raw(y)),
        }
    }

    fn bisect_inverse<F: Fn(f64) -> f64>(&self, t: f64, f: F) -> f64 {
        let mut hi = 2.0;
        while f(hi) < t {
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
        numeric::bisect(|y| f(y) - t, 1.0, hi, 1e-16, 2000)
            .map(|r| r.hi)
            .unwrap_or(hi)
    }

    /// `Σ p_i f(q_i / p_i)` with `0 · f(0/0) := 0`.
    ///
    /// `p` is the reference, `q` the alternative; `q` must vanish wherever
    /// `p` does. A Rényi spec reports its Hellinger value, see
    /// [`DivergenceSpec::renyi_value`].
    pub fn divergence_discrete(&self, p: &[f64], q: &[f64]) -> Result<DivergenceValue> {
        self.generator_sum(p, q, |y| self.raw(y)).map(|v| DivergenceValue(v.max(0.0)))
    }

    /// Rényi divergence of order α from its Hellinger(α) value `h`:
    /// `log(1 + (α − 1)h)/(α − 1)`. `None` for other kinds.
    pub fn renyi_value(&self, h: DivergenceValue) -> Option<f64> {
        self.alpha()
            .filter(|_| matches!(self.kind, DivergenceKind::Renyi(_)))
            .map(|a| ((a - 1.0) * h.value()).ln_1p() / (a - 1.0))
    }

    /// Same sum with the tilted generator (in generator units).
    pub fn divergence_discrete_tilted(&self, p: &[f64], q: &[f64]) -> Result<DivergenceValue> {
        self.generator_sum(p, q, |y| self.f_tilted(y)).map(|v| DivergenceValue(v.max(0.0)))
    }

    /// Same sum with the conjugate generator: `D_{f*}(p ‖ q) = D_f(q ‖ p)`.
    pub fn divergence_discrete_conjugate(&self, p: &[f64], q: &[f64]) -> Result<DivergenceValue> {
        self.generator_sum(p, q, |y| self.f_conjugate(y)).map(|v| DivergenceValue(v.max(0.0)))
    }

    fn generator_sum<F: Fn(f64) -> f64>(&self, p: &[f64], q: &[f64], f: F) -> Result<f64> {
        validate_pmf(p, "p")?;
        validate_pmf(q, "q")?;
        if p.len() != q.len() {
            return Err(Error::InvalidInput(format!(
                "probability vectors differ in length ({} vs {})",
                p.len(),
                q.len()
            )));
        }
        let mut total = 0.0;
        for (index, (&pi, &qi)) in p.iter().zip(q).enumerate() {
            if pi == 0.0 {
                if qi > 0.0 {
                    return Err(Error::AbsoluteContinuity { index });
                }
                continue;
            }
            total += pi * f(qi / pi);
        }
        Ok(total)
    }
}

fn validate_pmf(p: &[f64], name: &str) -> Result<()> {
    if p.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidInput(format!("{name} has negative or non-finite entries")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("{name} sums to {sum}, not 1")));
    }
    Ok(())
}

fn xlogx(y: f64) -> f64 {
    if y == 0.0 {
        0.0
    } else {
        y * y.ln()
    }
}

fn js(y: f64) -> f64 {
    if y == 0.0 {
        return LN_2;
    }
    xlogx(y) - (1.0 + y) * ((1.0 + y) / 2.0).ln()
}

impl fmt::Display for DivergenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DivergenceKind::*;
        match self.kind {
            Kl => write!(f, "kl"),
            Hellinger(a) => write!(f, "hellinger:{a}"),
            ChiSquared => write!(f, "chi2"),
            Triangle => write!(f, "triangle"),
            Jeffrey => write!(f, "jeffrey"),
            JensenShannon => write!(f, "js"),
            Renyi(a) => write!(f, "renyi:{a}"),
        }
    }
}

impl FromStr for DivergenceSpec {
    type Err = Error;

    /// Parses `kl`, `hellinger:α`, `chi2`, `triangle`, `jeffrey`, `js`, `renyi:α`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s.as_str(), None),
        };
        let order = |arg: Option<&str>| -> Result<f64> {
            let a = arg.ok_or_else(|| Error::InvalidInput(format!("{name} needs an order, e.g. {name}:2")))?;
            a.parse::<f64>().map_err(|_| Error::InvalidInput(format!("bad order {a:?} for {name}")))
        };
        let no_arg = |spec: Self| -> Result<Self> {
            match arg {
                None => Ok(spec),
                Some(_) => Err(Error::InvalidInput(format!("{name} takes no order"))),
            }
        };
        match name {
            "kl" => no_arg(Self::kl()),
            "chi2" => no_arg(Self::chi_squared()),
            "triangle" => no_arg(Self::triangle()),
            "jeffrey" => no_arg(Self::jeffrey()),
            "js" => no_arg(Self::jensen_shannon()),
            "hellinger" => Self::hellinger(order(arg)?),
            "renyi" => Self::renyi(order(arg)?),
            other => Err(Error::InvalidInput(format!("unknown divergence {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all() -> Vec<DivergenceSpec> {
        let mut v = DivergenceSpec::all_kinds(2.86).unwrap();
        v.push(DivergenceSpec::hellinger(2.0).unwrap());
        v.push(DivergenceSpec::hellinger(4.0).unwrap());
        v
    }

    #[test]
    fn generator_examples() {
        for s in all() {
            assert_eq!(s.f_raw(1.0).unwrap(), 0.0, "{s}");
        }
        let h2 = DivergenceSpec::hellinger(2.0).unwrap();
        assert_eq!(h2.f_raw(3.0).unwrap(), 8.0);
        assert_eq!(DivergenceSpec::triangle().f_raw(0.0).unwrap(), 1.0);
        assert!(DivergenceSpec::kl().f_raw(-0.1).is_err());
    }

    #[test]
    fn tilt_examples() {
        let chi = DivergenceSpec::chi_squared();
        for y in [0.0, 0.3, 1.0, 2.5, 40.0] {
            assert!((chi.f_tilted(y) - (y - 1.0) * (y - 1.0)).abs() < 1e-12);
        }
        assert_eq!(DivergenceSpec::kl().f_tilted(0.0), 1.0);
        let tri = DivergenceSpec::triangle();
        for y in [0.0, 0.5, 3.0] {
            assert_eq!(tri.f_tilted(y), tri.f_raw(y).unwrap());
        }
    }

    #[test]
    fn tilted_limits_at_zero_match_boundary_values() {
        for s in all() {
            let (f0, _) = s.boundary_values();
            let near = s.f_tilted(1e-12);
            if f0.is_finite() {
                assert!((near - f0).abs() < 1e-6, "{s}: {near} vs {f0}");
                assert!((s.f_tilted(0.0) - f0).abs() < 1e-15, "{s}");
            } else {
                assert!(near > 20.0, "{s}");
            }
        }
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(DivergenceSpec::triangle().boundary_values(), (1.0, 1.0));
        assert_eq!(DivergenceSpec::jensen_shannon().boundary_values(), (LN_2, LN_2));
        assert_eq!(DivergenceSpec::kl().boundary_values(), (1.0, f64::INFINITY));
        // f̃*(0) = lim f̃(y)/y, checked numerically where finite
        for s in [DivergenceSpec::triangle(), DivergenceSpec::jensen_shannon()] {
            let y = 1e9;
            assert!((s.f_tilted(y) / y - s.boundary_values().1).abs() < 1e-6);
        }
        for s in all() {
            let cap = s.radius_cap();
            match s.generator().kind() {
                DivergenceKind::Triangle => assert_eq!(cap, 2.0),
                DivergenceKind::JensenShannon => assert_eq!(cap, 2.0 * LN_2),
                _ => assert!(cap.is_infinite()),
            }
        }
    }

    #[test]
    fn tilted_shape_on_grid() {
        for s in all() {
            let mut prev = 0.0;
            let mut y = 0.01;
            while y <= 100.0 {
                let v = s.f_tilted(y);
                if (y - 1.0).abs() > 1e-9 {
                    assert!(v > 0.0, "{s} at {y}: {v}");
                }
                if y >= 1.0 {
                    assert!(v >= prev, "{s} not increasing at {y}");
                    prev = v;
                }
                y *= 1.05;
            }
            assert_eq!(s.f_tilted(1.0), 0.0);
            let h = 1e-6;
            let slope = (s.f_tilted(1.0 + h) - s.f_tilted(1.0 - h)) / (2.0 * h);
            assert!(slope.abs() < 1e-6, "{s}: f̃'(1) = {slope}");
            assert!(s.f_tilted_prime(1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for s in all() {
            for y in [0.2, 0.9, 1.7, 12.0] {
                let h = 1e-6 * y;
                let fd = (s.raw(y + h) - s.raw(y - h)) / (2.0 * h);
                assert!((fd - s.f_prime(y)).abs() < 1e-6 * fd.abs().max(1.0), "{s} at {y}");
            }
        }
    }

    #[test]
    fn inverse_examples() {
        for s in all() {
            assert_eq!(s.f_inverse_tail(0.0), 1.0);
        }
        assert!((DivergenceSpec::chi_squared().f_inverse_tail(4.0) - 3.0).abs() < 1e-15);
        let h2 = DivergenceSpec::hellinger(2.0).unwrap();
        assert!((h2.f_inverse_raw_tail(4.0) - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn inverse_roundtrip() {
        for s in all() {
            let mut y = 1.0;
            while y < 1e8 {
                let back = s.f_inverse_tail(s.f_tilted(y));
                assert!((back / y - 1.0).abs() < 1e-9, "{s}: {y} -> {back}");
                let back_raw = s.f_inverse_raw_tail(s.raw(y));
                assert!((back_raw / y - 1.0).abs() < 1e-9, "{s} raw: {y} -> {back_raw}");
                y *= 3.7;
            }
        }
    }

    #[test]
    fn regular_variation_of_polynomial_tilts() {
        let y = 1e6;
        for (s, rho) in [
            (DivergenceSpec::chi_squared(), 2.0),
            (DivergenceSpec::hellinger(2.86).unwrap(), 2.86),
            (DivergenceSpec::hellinger(4.0).unwrap(), 4.0),
        ] {
            for t in [2.0, 10.0] {
                let ratio = s.f_tilted(t * y) / s.f_tilted(y);
                let want = f64::powf(t, rho);
                assert!((ratio / want - 1.0).abs() < 0.01, "{s}");
            }
        }
    }

    #[test]
    fn renyi_radius_examples() {
        assert!((renyi_radius(2.0, LN_2) - 1.0).abs() < 1e-15);
        let tiny = renyi_radius(3.0, 1e-9);
        assert!((tiny / 1e-9 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn discrete_examples() {
        let kl = DivergenceSpec::kl();
        let p = [0.5, 0.5];
        assert_eq!(kl.divergence_discrete(&p, &p).unwrap().value(), 0.0);
        let d = kl.divergence_discrete(&p, &[0.75, 0.25]).unwrap().value();
        let want = 0.75 * 1.5f64.ln() + 0.25 * 0.5f64.ln();
        assert!((d - want).abs() < 1e-15);
        assert!((d - 0.130812).abs() < 1e-6);
        let chi = DivergenceSpec::chi_squared().divergence_discrete(&p, &[1.0, 0.0]).unwrap();
        assert!((chi.value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn discrete_rejects_bad_input() {
        let kl = DivergenceSpec::kl();
        assert!(matches!(
            kl.divergence_discrete(&[1.0, 0.0], &[0.5, 0.5]),
            Err(Error::AbsoluteContinuity { index: 1 })
        ));
        assert!(kl.divergence_discrete(&[0.5, 0.4], &[0.5, 0.5]).is_err());
        assert!(kl.divergence_discrete(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn renyi_discrete_is_transformed_hellinger() {
        let p = [0.2, 0.3, 0.5];
        let q = [0.4, 0.4, 0.2];
        let h = DivergenceSpec::hellinger(3.0).unwrap().divergence_discrete(&p, &q).unwrap();
        let renyi = DivergenceSpec::renyi(3.0).unwrap();
        assert_eq!(renyi.divergence_discrete(&p, &q).unwrap(), h);
        let r = renyi.renyi_value(h).unwrap();
        let h = h.value();
        // closed form of the Rényi divergence of order α: log Σ q^α p^(1−α) / (α − 1)
        let direct = (p.iter().zip(&q).map(|(a, b)| b.powi(3) * a.powi(-2)).sum::<f64>()).ln() / 2.0;
        assert!((r - direct).abs() < 1e-14);
        assert!((renyi_radius(3.0, r) - h).abs() < 1e-13);
    }

    #[test]
    fn parse_and_display() {
        for text in ["kl", "hellinger:2.86", "chi2", "triangle", "jeffrey", "js", "renyi:2"] {
            let s: DivergenceSpec = text.parse().unwrap();
            assert_eq!(s.to_string(), text);
        }
        assert!("hellinger".parse::<DivergenceSpec>().is_err());
        assert!("hellinger:1".parse::<DivergenceSpec>().is_err());
        assert!("kl:2".parse::<DivergenceSpec>().is_err());
        assert!("tv".parse::<DivergenceSpec>().is_err());
    }

    #[test]
    fn serde_validates_order() {
        let bad = DivergenceKind::Hellinger(0.5);
        assert!(DivergenceSpec::try_from(bad).is_err());
    }
}
