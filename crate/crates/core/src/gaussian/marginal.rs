use num_complex::Complex;

use crate::error::{CloneError, Result};
use crate::scalar::{Scalar, Tolerances};

use super::state::GaussianState;

/// A single clone: coherent amplitude plus isotropic thermal noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloneMarginal<T> {
    pub coherent_amplitude: Complex<T>,
    pub thermal_noise: T,
    pub fidelity: T,
}

impl<T: Scalar> CloneMarginal<T> {
    pub fn new(coherent_amplitude: Complex<T>, thermal_noise: T) -> Result<Self> {
        if !(thermal_noise >= T::zero()) {
            return Err(CloneError::NegativeNoise { index: 0, value: thermal_noise.as_f64() });
        }
        Ok(Self { coherent_amplitude, thermal_noise, fidelity: T::one() / (T::one() + thermal_noise) })
    }
}

/// Reads mode `j` of `state` as a clone. The covariance block must be
/// isotropic: equal `x`/`p` variances and no cross term.
pub fn clone_marginal<T: Scalar>(
    state: &GaussianState<T>,
    mode: usize,
    tol: &Tolerances<T>,
) -> Result<CloneMarginal<T>> {
    if mode >= state.num_modes() {
        return Err(CloneError::DimensionMismatch(format!(
            "mode {mode} out of range for a {}-mode state",
            state.num_modes()
        )));
    }
    let [[vx, cxp], [cpx, vp]] = state.mode_block(mode);
    let scale = T::one().max(vx.abs()).max(vp.abs());
    if (vx - vp).abs() > tol.algebraic * scale || cxp.abs().max(cpx.abs()) > tol.algebraic * scale {
        return Err(CloneError::NonIsotropic { mode });
    }
    let variance = (vx + vp) / T::lit(2.0);
    let noise = (variance - T::one()) / T::lit(2.0);
    if noise < -tol.algebraic * scale {
        return Err(CloneError::NegativeNoise { index: mode, value: noise.as_f64() });
    }
    CloneMarginal::new(state.amplitude(mode), noise.max(T::zero()))
}

/// Husimi Q-function `exp(-|α-β|²/(n+1)) / (π(n+1))` of a clone.
pub fn husimi_q<T: Scalar>(marginal: &CloneMarginal<T>, beta: Complex<T>) -> T {
    let w = marginal.thermal_noise + T::one();
    (-(marginal.coherent_amplitude - beta).norm_sqr() / w).exp() / (T::pi() * w)
}
