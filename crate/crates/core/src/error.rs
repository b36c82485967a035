use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no observations exceed the threshold {threshold}")]
    NoExceedances { threshold: f64 },

    #[error("degenerate likelihood: {0}")]
    DegenerateLikelihood(String),

    #[error("fitted shape xi = {xi} is not positive; the model is not heavy-tailed")]
    NotHeavyTailed { xi: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("level {x} lies below the model threshold {u}")]
    BelowThreshold { x: f64, u: f64 },

    #[error("tail integral diverges: distortion power s = {s} is not below the tail index {beta}")]
    DivergentTail { s: f64, beta: f64 },

    #[error("target probability {target} is below the smallest resolved curve probability {resolved}")]
    Extrapolation { target: f64, resolved: f64 },

    #[error("target probability {target} exceeds the curve at the grid minimum {x} (probability {probability})")]
    BelowGrid { target: f64, x: f64, probability: f64 },

    #[error("distribution q is not absolutely continuous w.r.t. p at index {index}")]
    AbsoluteContinuity { index: usize },

    #[error("divergence {0} has f*(0) = ∞; the constant-tail root does not exist")]
    InfiniteConjugate(String),
}
