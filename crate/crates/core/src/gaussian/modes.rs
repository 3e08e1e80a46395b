use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{CloneError, Result};
use crate::scalar::Scalar;

use super::channel::GaussianChannel;

/// Heisenberg-picture linear transformation of bosonic modes,
/// `a_out = A a_in + B a_in^†`.
///
/// Input modes that are not declared as signal modes are taken to be in the
/// vacuum and are traced into the added-noise matrix of the channel.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModeMap<T: Scalar> {
    pub annihilation: DMatrix<Complex<T>>,
    pub creation: DMatrix<Complex<T>>,
}

impl<T: Scalar> LinearModeMap<T> {
    pub fn zeros(outputs: usize, inputs: usize) -> Self {
        Self { annihilation: DMatrix::zeros(outputs, inputs), creation: DMatrix::zeros(outputs, inputs) }
    }

    pub fn outputs(&self) -> usize {
        self.annihilation.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.annihilation.ncols()
    }

    /// Real quadrature matrix (`2 outputs x 2 inputs`, `(x.., p..)` ordering).
    pub fn to_real(&self) -> DMatrix<T> {
        let (mo, mi) = (self.outputs(), self.inputs());
        let mut t = DMatrix::zeros(2 * mo, 2 * mi);
        for j in 0..mo {
            for k in 0..mi {
                let a = self.annihilation[(j, k)];
                let b = self.creation[(j, k)];
                t[(j, k)] = a.re + b.re;
                t[(j, mi + k)] = b.im - a.im;
                t[(mo + j, k)] = a.im + b.im;
                t[(mo + j, mi + k)] = a.re - b.re;
            }
        }
        t
    }

    /// Commutator matrix `[a_j, a_k^†] = (A A^† - B B^†)_jk`; the identity for
    /// physical transformations.
    pub fn commutators(&self) -> DMatrix<Complex<T>> {
        &self.annihilation * self.annihilation.adjoint() - &self.creation * self.creation.adjoint()
    }

    /// Gaussian channel on the listed signal inputs, with every other input in
    /// the vacuum.
    pub fn channel(&self, signal_inputs: &[usize]) -> Result<GaussianChannel<T>> {
        let mi = self.inputs();
        if let Some(&bad) = signal_inputs.iter().find(|&&k| k >= mi) {
            return Err(CloneError::DimensionMismatch(format!("signal input {bad} out of range 0..{mi}")));
        }
        let t = self.to_real();
        let ancillas: Vec<usize> = (0..mi).filter(|k| !signal_inputs.contains(k)).collect();
        let pick = |modes: &[usize]| {
            let cols: Vec<usize> =
                modes.iter().copied().chain(modes.iter().map(|k| mi + k)).collect();
            DMatrix::from_fn(t.nrows(), cols.len(), |r, c| t[(r, cols[c])])
        };
        let s = pick(signal_inputs);
        let noise = pick(&ancillas);
        let g = &noise * noise.transpose();
        GaussianChannel::new(s, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussianState;

    #[test]
    fn beam_splitter_is_passive() {
        let t = 0.8f64;
        let r = (1.0 - t * t).sqrt();
        let mut map = LinearModeMap::zeros(2, 2);
        map.annihilation[(0, 0)] = Complex::new(t, 0.0);
        map.annihilation[(0, 1)] = Complex::new(-r, 0.0);
        map.annihilation[(1, 0)] = Complex::new(r, 0.0);
        map.annihilation[(1, 1)] = Complex::new(t, 0.0);
        let ch = map.channel(&[0, 1]).unwrap();
        assert!(ch.g().iter().all(|v| v.abs() < 1e-15));
        assert!(ch.cp_min_eigenvalue().abs() < 1e-12);
    }

    #[test]
    fn phase_conjugating_amplifier_noise() {
        // a_out = sqrt(2) a + c^†, c in vacuum
        let mut map = LinearModeMap::zeros(1, 2);
        map.annihilation[(0, 0)] = Complex::new(2f64.sqrt(), 0.0);
        map.creation[(0, 1)] = Complex::new(1.0, 0.0);
        assert!((map.commutators()[(0, 0)].re - 1.0).abs() < 1e-15);
        let ch = map.channel(&[0]).unwrap();
        let out = ch.apply(&GaussianState::vacuum(1)).unwrap();
        assert!((out.cov()[(0, 0)] - 3.0).abs() < 1e-14);
        assert!((out.cov()[(1, 1)] - 3.0).abs() < 1e-14);
        assert!(ch.cp_min_eigenvalue().abs() < 1e-12);
    }

    #[test]
    fn creation_term_conjugates_the_mean() {
        let mut map = LinearModeMap::zeros(1, 1);
        map.creation[(0, 0)] = Complex::new(1.0, 0.0);
        let t = map.to_real();
        assert_eq!(t[(0, 0)], 1.0);
        assert_eq!(t[(1, 1)], -1.0);
    }
}
