//! Small numerical kernels shared by the solvers: bracketed bisection,
//! adaptive Gauss–Kronrod quadrature and Nelder–Mead minimization.

use crate::error::{Error, Result};

/// Outcome of a bracketed bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

/// Bisection for a monotone function on `[lo, hi]`.
///
/// `g(lo)` and `g(hi)` must have opposite signs (zero counts as either).
/// Iterates until the bracket is narrower than `rel_tol · max(|lo|, |hi|)`,
/// the midpoint stops moving in floating point, or `max_iter` is reached.
pub fn bisect<F>(g: F, mut lo: f64, mut hi: f64, rel_tol: f64, max_iter: usize) -> Result<Root>
where
    F: Fn(f64) -> f64,
{
    let g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo.is_nan() || g_hi.is_nan() {
        return Err(Error::InvalidInput("bisection endpoint evaluates to NaN".into()));
    }
    if g_lo == 0.0 {
        return Ok(Root { x: lo, lo, hi: lo, iterations: 0 });
    }
    if g_hi == 0.0 {
        return Ok(Root { x: hi, lo: hi, hi, iterations: 0 });
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::InvalidInput(format!(
            "bisection bracket [{lo}, {hi}] does not change sign ({g_lo}, {g_hi})"
        )));
    }
    let increasing = g_hi > 0.0;
    for it in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= rel_tol * lo.abs().max(hi.abs()) {
            return Ok(Root { x: mid.clamp(lo, hi), lo, hi, iterations: it });
        }
        let v = g(mid);
        if v == 0.0 {
            return Ok(Root { x: mid, lo: mid, hi: mid, iterations: it + 1 });
        }
        if (v > 0.0) == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Root { x: 0.5 * (lo + hi), lo, hi, iterations: max_iter })
}

// Gauss–Kronrod 7/15 nodes and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
    pub max_depth: u32,
}

impl Default for QuadTol {
    fn default() -> Self {
        Self { abs: 1e-14, rel: 1e-12, max_depth: 48 }
    }
}

/// Adaptive Gauss–Kronrod (G7/K15) quadrature of `f` over `[a, b]`.
///
/// Subdivides recursively until the Kronrod/Gauss difference on every panel
/// meets its share of the tolerance. Returns the integral estimate; panels
/// that hit `max_depth` contribute their best estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: QuadTol) -> f64 {
    if a == b {
        return 0.0;
    }
    if a > b {
        return -integrate(f, b, a, tol);
    }
    let (whole, _) = gk15(&f, a, b);
    let target = tol.abs.max(tol.rel * whole.abs());
    adapt(&f, a, b, target, tol.max_depth)
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, target: f64, depth: u32) -> f64 {
    let (val, err) = gk15(f, a, b);
    let mid = 0.5 * (a + b);
    if err <= target || depth == 0 || mid <= a || mid >= b {
        return val;
    }
    adapt(f, a, mid, 0.5 * target, depth - 1) + adapt(f, mid, b, 0.5 * target, depth - 1)
}

/// Result of a Nelder–Mead run.
#[derive(Debug, Clone)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

/// Nelder–Mead simplex minimization.
///
/// `step` sets the initial simplex edge along each coordinate. Stops when the
/// spread of objective values across the simplex falls below `ftol`
/// (absolute) and the simplex diameter below `xtol`.
pub fn nelder_mead<F>(
    f: F,
    start: &[f64],
    step: &[f64],
    ftol: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<Minimum>
where
    F: Fn(&[f64]) -> f64,
{
    let n = start.len();
    let eval = |p: &[f64]| {
        let v = f(p);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for i in 0..n {
        let mut p = start.to_vec();
        p[i] += step[i];
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| eval(p)).collect();

    for it in 0..max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let diameter = simplex[1..]
            .iter()
            .flat_map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0_f64, f64::max);
        if values[0].is_finite() && spread <= ftol && diameter <= xtol {
            return Ok(Minimum { point: simplex[0].clone(), value: values[0], iterations: it });
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|p| p[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (w - c)).collect()
        };

        let reflected = along(-1.0);
        let fr = eval(&reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = eval(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[n] {
            let c = along(-0.5);
            let v = eval(&c);
            (c, v)
        } else {
            let c = along(0.5);
            let v = eval(&c);
            (c, v)
        };
        if fc < values[n].min(fr) {
            simplex[n] = contracted;
            values[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        for i in 1..=n {
            let shrunk: Vec<f64> =
                simplex[0].iter().zip(&simplex[i]).map(|(b, p)| b + 0.5 * (p - b)).collect();
            values[i] = eval(&shrunk);
            simplex[i] = shrunk;
        }
    }
    Err(Error::NonConvergence { what: "Nelder-Mead", iterations: max_iter })
}

/// Hessian by central differences with per-coordinate step `h[i]`.
pub fn hessian<F: Fn(&[f64]) -> f64>(f: F, at: &[f64], h: &[f64]) -> Vec<Vec<f64>> {
    let n = at.len();
    let mut out = vec![vec![0.0; n]; n];
    let shifted = |di: f64, i: usize, dj: f64, j: usize| {
        let mut p = at.to_vec();
        p[i] += di;
        p[j] += dj;
        f(&p)
    };
    for i in 0..n {
        for j in i..n {
            let v = (shifted(h[i], i, h[j], j) - shifted(h[i], i, -h[j], j)
                - shifted(-h[i], i, h[j], j)
                + shifted(-h[i], i, -h[j], j))
                / (4.0 * h[i] * h[j]);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}
