use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CloneError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("noise of clone {index} is negative or not finite ({value})")]
    NegativeNoise { index: usize, value: f64 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("profile is off the optimal surface: residual {residual:e} exceeds {tolerance:e}")]
    OffSurface { residual: f64, tolerance: f64 },

    #[error("mode {mode} has a non-isotropic covariance block")]
    NonIsotropic { mode: usize },

    #[error("no bracketing root for the Lagrange multiplier: {0}")]
    NoBracket(String),

    #[error("no zero-noise clone to remove")]
    NoPerfectClone,

    #[error("{what} = {value} lies outside [0, 1]")]
    OutOfRange { what: String, value: f64 },

    #[error("unitary completion failed: {0}")]
    UnitaryCompletion(String),

    #[error("invalid Lagrange multiplier {0}: must be negative")]
    InvalidMultiplier(f64),

    #[error("weights are inconsistent with the profile: extremal-equation residual {0:e}")]
    WeightMismatch(f64),

    #[error("no feedforward phase convention reproduces the input amplitude")]
    NoPhaseConvention,
}

pub type Result<T, E = CloneError> = std::result::Result<T, E>;
