use nalgebra::DMatrix;

use crate::scalar::Scalar;

/// The symplectic form `J = [[0, I], [-I, 0]]` on `m` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm<T: Scalar> {
    modes: usize,
    matrix: DMatrix<T>,
}

impl<T: Scalar> SymplecticForm<T> {
    pub fn new(modes: usize) -> Self {
        Self { modes, matrix: symplectic_form(modes) }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.matrix
    }
}

pub fn symplectic_form<T: Scalar>(modes: usize) -> DMatrix<T> {
    let mut j = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        j[(k, modes + k)] = T::one();
        j[(modes + k, k)] = -T::one();
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisymmetric_and_squares_to_minus_identity() {
        for m in 1..5 {
            let j = SymplecticForm::<f64>::new(m).into_matrix();
            assert_eq!(j.transpose(), -&j);
            assert_eq!(&j * &j, -DMatrix::<f64>::identity(2 * m, 2 * m));
        }
    }
}
