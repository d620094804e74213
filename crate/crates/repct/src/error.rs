use thiserror::Error;

/// Unified error type for threshold formulas, integration, and experiment
/// drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input lies outside the mathematical domain of a formula (for example
    /// a threshold curve evaluated where its radicand is negative).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value violates a documented precondition.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The adaptive integrator could not make progress: the step size
    /// underflowed without triggering blow-up detection.
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepFailure { t: f64, h: f64 },

    /// Bisection could not establish a survive/breakdown bracket.
    #[error("no bracket: {0}")]
    NoBracket(String),
}

pub type Result<T> = std::result::Result<T, Error>;
