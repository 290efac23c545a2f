use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("a Gaussian state needs at least one mode")]
    NoModes,

    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("operation needs two distinct modes, got {0} twice")]
    SameMode(usize),

    #[error("expected a {expected}-mode state, got {actual} modes")]
    WrongModeCount { expected: usize, actual: usize },

    #[error("squeezing parameter must be finite and non-negative, got {0}")]
    InvalidSqueezing(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("network needs at least {min} parties, got {actual}")]
    TooFewParties { min: usize, actual: usize },

    #[error("expected {expected} per-station gains, got {actual}")]
    GainCount { expected: usize, actual: usize },

    #[error("no squeezing value assigned to mode {0}")]
    MissingSqueezing(usize),

    #[error("closed-form optimal gain is not defined for {0}")]
    GainNotApplicable(String),

    #[error("forced outcome list exhausted after {0} measurements")]
    OutcomesExhausted(usize),

    #[error("covariance matrix is not symmetric (max asymmetry {0:e})")]
    Asymmetric(f64),

    #[error("covariance violates the uncertainty principle (smallest symplectic eigenvalue {0})")]
    Unphysical(f64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("empty grid")]
    EmptyGrid,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
