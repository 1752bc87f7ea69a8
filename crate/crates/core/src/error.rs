use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot compose an empty pulse sequence")]
    EmptySequence,

    #[error("expected {expected} free phases, got {found}")]
    PhaseCountMismatch { expected: usize, found: usize },

    #[error("invalid sequence spec: {0}")]
    InvalidSpec(String),

    #[error("phase stabilization (n3 = {n3}) requires a target phase")]
    StabilizationWithoutTargetPhase { n3: usize },

    #[error("no convergence after {iterations} iterations (residual norm {residual_norm:.3e})")]
    NoConvergence { iterations: usize, residual_norm: f64 },

    #[error("target phase undefined at area scale {scale}: |U21| vanishes")]
    UndefinedPhase { scale: f64 },

    #[error("excitation never drops below {threshold:e} within {max_offset} beam widths")]
    NoCrosstalkRadius { threshold: f64, max_offset: f64 },

    #[error("target deviation {deviation:.3e} already exceeds threshold at beam center")]
    RobustnessViolatedAtCenter { deviation: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown catalog entry '{0}'")]
    UnknownEntry(String),
}
