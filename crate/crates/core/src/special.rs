//! Special functions.

use std::f64::consts::E;

/// Principal branch of the Lambert W function on `[0, ∞)`: the solution
/// `w ≥ 0` of `w·e^w = t`.
///
/// Halley iteration seeded by `log t − log log t` above `e` and by
/// `log(1 + t)` below.
pub fn lambert_w(t: f64) -> f64 {
    assert!(t >= 0.0, "lambert_w is defined here for t ≥ 0, got {t}");
    if t == 0.0 {
        return 0.0;
    }
    if t.is_infinite() {
        return f64::INFINITY;
    }
    let mut w = if t > E {
        let l = t.ln();
        l - l.ln()
    } else {
        t.ln_1p()
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - t;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 1e-15 * w.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    w
}
