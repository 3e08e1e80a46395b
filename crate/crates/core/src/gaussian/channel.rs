use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{CloneError, Result};
use crate::linalg::{asymmetry, compose_complex, max_abs, min_hermitian_eigenvalue};
use crate::scalar::{Scalar, Tolerances};

use super::state::GaussianState;
use super::symplectic::symplectic_form;

/// A Gaussian CP map `γ -> S γ S^T + G`, `r -> S r`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel<T: Scalar> {
    m_in: usize,
    m_out: usize,
    s: DMatrix<T>,
    g: DMatrix<T>,
}

impl<T: Scalar> GaussianChannel<T> {
    /// `s` is `2 m_out x 2 m_in`, `g` is symmetric `2 m_out x 2 m_out`.
    pub fn new(s: DMatrix<T>, g: DMatrix<T>) -> Result<Self> {
        let (rows, cols) = s.shape();
        if rows == 0 || cols == 0 || rows % 2 != 0 || cols % 2 != 0 {
            return Err(CloneError::DimensionMismatch(format!(
                "transfer matrix shape {rows}x{cols} must have positive even dimensions"
            )));
        }
        if g.shape() != (rows, rows) {
            return Err(CloneError::DimensionMismatch(format!(
                "noise matrix is {}x{}, expected {rows}x{rows}",
                g.nrows(),
                g.ncols()
            )));
        }
        let tol = Tolerances::<T>::default();
        if asymmetry(&g) > tol.algebraic * T::one().max(max_abs(&g)) {
            return Err(CloneError::InvalidParameter("noise matrix is not symmetric".into()));
        }
        Ok(Self { m_in: cols / 2, m_out: rows / 2, s, g })
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            m_in: modes,
            m_out: modes,
            s: DMatrix::identity(2 * modes, 2 * modes),
            g: DMatrix::zeros(2 * modes, 2 * modes),
        }
    }

    pub fn m_in(&self) -> usize {
        self.m_in
    }

    pub fn m_out(&self) -> usize {
        self.m_out
    }

    pub fn s(&self) -> &DMatrix<T> {
        &self.s
    }

    pub fn g(&self) -> &DMatrix<T> {
        &self.g
    }

    pub fn apply(&self, state: &GaussianState<T>) -> Result<GaussianState<T>> {
        if state.num_modes() != self.m_in {
            return Err(CloneError::DimensionMismatch(format!(
                "channel expects {} input modes, state has {}",
                self.m_in,
                state.num_modes()
            )));
        }
        let mean = &self.s * state.mean();
        let cov = &self.s * state.cov() * self.s.transpose() + &self.g;
        GaussianState::from_parts(mean, cov)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &GaussianChannel<T>) -> Result<Self> {
        if first.m_out != self.m_in {
            return Err(CloneError::DimensionMismatch(format!(
                "cannot compose: inner channel has {} outputs, outer expects {}",
                first.m_out, self.m_in
            )));
        }
        let s = &self.s * &first.s;
        let g = &self.s * &first.g * self.s.transpose() + &self.g;
        Ok(Self { m_in: first.m_in, m_out: self.m_out, s, g })
    }

    /// `K = J_out - S J_in S^T`.
    pub fn k_matrix(&self) -> DMatrix<T> {
        let j_in = symplectic_form::<T>(self.m_in);
        let j_out = symplectic_form::<T>(self.m_out);
        j_out - &self.s * j_in * self.s.transpose()
    }

    /// The Hermitian matrix `A = G + iK`.
    pub fn cp_matrix(&self) -> DMatrix<Complex<T>> {
        compose_complex(&self.g, &self.k_matrix())
    }

    /// Minimum eigenvalue of `G + iK`; the map is CP iff this is `>= -tol`.
    pub fn cp_min_eigenvalue(&self) -> T {
        min_hermitian_eigenvalue(&self.cp_matrix())
    }

    pub fn is_completely_positive(&self, tol: &Tolerances<T>) -> bool {
        self.cp_min_eigenvalue() >= -tol.psd
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    #[test]
    fn identity_channel_leaves_state_alone() {
        let st = GaussianState::coherent(&[Complex::new(0.2, 1.1), Complex::new(-0.5, 0.0)]);
        let out = GaussianChannel::identity(2).apply(&st).unwrap();
        assert_eq!(out, st);
        assert!(GaussianChannel::<f64>::identity(2).cp_min_eigenvalue().abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let st = GaussianState::<f64>::vacuum(2);
        let err = GaussianChannel::identity(1).apply(&st);
        assert!(matches!(err, Err(CloneError::DimensionMismatch(_))));
    }

    #[test]
    fn pure_loss_is_cp_and_noiseless_amplifier_is_not() {
        let eta: f64 = 0.6;
        let s = DMatrix::identity(2, 2) * eta.sqrt();
        let g = DMatrix::identity(2, 2) * (1.0 - eta);
        let loss = GaussianChannel::new(s, g).unwrap();
        assert!(loss.cp_min_eigenvalue().abs() < 1e-12);

        let amp = GaussianChannel::new(DMatrix::identity(2, 2) * 2.0, DMatrix::zeros(2, 2)).unwrap();
        assert!(amp.cp_min_eigenvalue() < -1.0);
    }

    #[test]
    fn asymmetric_noise_rejected() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(GaussianChannel::new(DMatrix::identity(2, 2), g).is_err());
    }

    #[test]
    fn composition_of_losses() {
        let loss = |eta: f64| {
            GaussianChannel::new(DMatrix::identity(2, 2) * eta.sqrt(), DMatrix::identity(2, 2) * (1.0 - eta))
                .unwrap()
        };
        let both = loss(0.5).after(&loss(0.4)).unwrap();
        let direct = loss(0.2);
        assert!(crate::linalg::max_abs_diff(both.s(), direct.s()) < 1e-15);
        assert!(crate::linalg::max_abs_diff(both.g(), direct.g()) < 1e-15);
        let st = GaussianState::from_parts(DVector::from_vec(vec![1.0, 2.0]), DMatrix::identity(2, 2)).unwrap();
        assert!((both.apply(&st).unwrap().mean()[1] - 2.0 * 0.2f64.sqrt()).abs() < 1e-15);
    }
}
