use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inexactness level {0} is outside [0, 1)")]
    InvalidDelta(f64),

    #[error("stepsize {h} is outside the admissible interval [0, {h_max}] (divergence region)")]
    DivergenceRegion { h: f64, h_max: f64 },

    #[error("stepsize {h} is outside the interval required here: {reason}")]
    StepsizeOutOfRange { h: f64, reason: &'static str },

    #[error("smoothness constant {0} must be positive and finite")]
    InvalidSmoothness(f64),

    #[error("iteration count must be at least 1")]
    InvalidIterationCount,

    #[error("no admissible real root of the multiplier cubic at h = {h}, delta = {delta}")]
    NoRealRoot { h: f64, delta: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("oracle factor {factor} is not admissible for delta = {delta}")]
    InadmissibleOracle { factor: f64, delta: f64 },

    #[error("oracle output violates relative inexactness at iteration {iteration}: error ratio {ratio} > delta {delta}")]
    OracleViolation { iteration: usize, ratio: f64, delta: f64 },

    #[error("no feasible candidate found within a budget of {budget} starts")]
    NoFeasibleCandidate { budget: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
