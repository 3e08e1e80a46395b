use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{CloneError, Result};
use crate::linalg::{asymmetry, compose_complex, min_hermitian_eigenvalue};
use crate::scalar::{Scalar, Tolerances};

use super::symplectic::symplectic_form;

/// `(x, p) = (√2 Re α, √2 Im α)`, so that `<a> = α` with `a = (x + ip)/√2`.
pub fn amplitude_to_quadratures<T: Scalar>(alpha: Complex<T>) -> (T, T) {
    let s = T::sqrt2();
    (s * alpha.re, s * alpha.im)
}

pub fn quadratures_to_amplitude<T: Scalar>(x: T, p: T) -> Complex<T> {
    let s = T::inv_sqrt2();
    Complex::new(s * x, s * p)
}

/// Mean quadrature vector and covariance matrix of an `m`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState<T: Scalar> {
    mean: DVector<T>,
    cov: DMatrix<T>,
}

impl<T: Scalar> GaussianState<T> {
    /// Builds a state, checking shapes, symmetry and `γ + iJ ⪰ 0`.
    pub fn new(mean: DVector<T>, cov: DMatrix<T>, tol: &Tolerances<T>) -> Result<Self> {
        let state = Self::from_parts(mean, cov)?;
        let scale = T::one().max(crate::linalg::max_abs(&state.cov));
        if asymmetry(&state.cov) > tol.algebraic * scale {
            return Err(CloneError::InvalidParameter("covariance matrix is not symmetric".into()));
        }
        let min_eig = state.uncertainty_min_eigenvalue();
        if min_eig < -tol.psd {
            return Err(CloneError::InvalidParameter(format!(
                "covariance violates the uncertainty principle (min eigenvalue {:e})",
                min_eig.as_f64()
            )));
        }
        Ok(state)
    }

    /// Shape checks only. Used for channel outputs, which may be unphysical
    /// when the channel is not completely positive.
    pub fn from_parts(mean: DVector<T>, cov: DMatrix<T>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(CloneError::DimensionMismatch(format!(
                "mean vector length {dim} is not a positive even number"
            )));
        }
        if cov.shape() != (dim, dim) {
            return Err(CloneError::DimensionMismatch(format!(
                "covariance is {}x{}, expected {dim}x{dim}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        Ok(Self { mean, cov })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self { mean: DVector::zeros(2 * modes), cov: DMatrix::identity(2 * modes, 2 * modes) }
    }

    /// Product of coherent states `|α_1> ⊗ ... ⊗ |α_m>`.
    pub fn coherent(amplitudes: &[Complex<T>]) -> Self {
        let m = amplitudes.len();
        let mut state = Self::vacuum(m);
        for (k, a) in amplitudes.iter().enumerate() {
            let (x, p) = amplitude_to_quadratures(*a);
            state.mean[k] = x;
            state.mean[m + k] = p;
        }
        state
    }

    /// `n` identical replicas of `|α>`.
    pub fn coherent_replicas(alpha: Complex<T>, n: usize) -> Self {
        Self::coherent(&vec![alpha; n])
    }

    /// Single-mode displaced thermal state with `thermal_noise` mean photons.
    pub fn displaced_thermal(alpha: Complex<T>, thermal_noise: T) -> Self {
        let mut state = Self::coherent(&[alpha]);
        let v = T::one() + T::lit(2.0) * thermal_noise;
        state.cov[(0, 0)] = v;
        state.cov[(1, 1)] = v;
        state
    }

    pub fn num_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<T> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<T> {
        &self.cov
    }

    /// Complex amplitude `<a_j>` of mode `j`.
    pub fn amplitude(&self, mode: usize) -> Complex<T> {
        let m = self.num_modes();
        quadratures_to_amplitude(self.mean[mode], self.mean[m + mode])
    }

    /// The 2x2 covariance block of one mode, ordered `(x_j, p_j)`.
    pub fn mode_block(&self, mode: usize) -> [[T; 2]; 2] {
        let m = self.num_modes();
        let (x, p) = (mode, m + mode);
        [[self.cov[(x, x)], self.cov[(x, p)]], [self.cov[(p, x)], self.cov[(p, p)]]]
    }

    /// Minimum eigenvalue of `γ + iJ`; non-negative for physical states.
    pub fn uncertainty_min_eigenvalue(&self) -> T {
        let j = symplectic_form::<T>(self.num_modes());
        min_hermitian_eigenvalue(&compose_complex(&self.cov, &j))
    }

    pub fn is_physical(&self, tol: &Tolerances<T>) -> bool {
        self.uncertainty_min_eigenvalue() >= -tol.psd
    }
}
