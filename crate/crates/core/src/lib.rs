//! Robust tail bounds for heavy-tailed reference models.
//!
//! The crate fits a semi-parametric generalized Pareto tail to exceedance
//! data and computes worst-case exceedance probabilities
//! `sup { P(X > x) : D(P, P̂) ≤ δ }` for two families of discrepancies:
//!
//! - distorted order-1 Wasserstein distances with ground cost `|y^s − z^s|`
//!   ([`wasserstein`]);
//! - Csiszár f-divergences such as KL, Hellinger, χ², triangle
//!   discrimination, Jeffrey, Jensen–Shannon and Rényi ([`divergence`],
//!   [`fdiv`]).
//!
//! Each family comes with an exact pre-asymptotic solver and the closed-form
//! asymptotic tail. Radii can be calibrated from data ([`radius`]) and every
//! solver has a brute-force counterpart in [`oracle`] for verification.

// `!(x > 0.0)` style checks reject NaN on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod divergence;
pub mod error;
pub mod evt;
pub mod fdiv;
pub mod io;
pub mod numeric;
pub mod oracle;
pub mod radius;
pub mod sample;
pub mod special;
pub mod wasserstein;

pub use curve::{AmbiguitySet, CurveMethod, CurvePoint, WorstCaseCurve};
pub use divergence::{DivergenceKind, DivergenceSpec};
pub use error::{Error, Result};
pub use evt::{fit_gpd_mle, fit_tail, FitResult, GpdFit, TailModel};
pub use sample::Sample;
