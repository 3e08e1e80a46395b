use nalgebra::DMatrix;

use crate::design::NoiseProfile;
use crate::gaussian::GaussianChannel;
use crate::linalg::block2;
use crate::scalar::Scalar;

/// `S` mapping the collected mode to `M` clones: `1/√N` on every clone's
/// `x` (resp. `p`) from the input `x` (resp. `p`). Shape `2M x 2`.
pub fn first_moment_matrix<T: Scalar>(n_in: usize, m_out: usize) -> DMatrix<T> {
    let c = T::one() / T::from_count(n_in).sqrt();
    let mut s = DMatrix::zeros(2 * m_out, 2);
    for j in 0..m_out {
        s[(j, 0)] = c;
        s[(m_out + j, 1)] = c;
    }
    s
}

/// `G_opt = diag(I + 2F - H/N, I + 2F - H/N)`.
pub fn optimal_noise_matrix<T: Scalar>(profile: &NoiseProfile<T>) -> DMatrix<T> {
    let m = profile.m_out();
    let inv_n = T::one() / T::from_count(profile.n_in());
    let block = DMatrix::identity(m, m) + profile.f_matrix() * T::lit(2.0) - DMatrix::from_element(m, m, inv_n);
    let zero = DMatrix::zeros(m, m);
    block2(&block, &zero, &zero, &block)
}

pub fn optimal_channel<T: Scalar>(profile: &NoiseProfile<T>) -> GaussianChannel<T> {
    GaussianChannel::new(first_moment_matrix(profile.n_in(), profile.m_out()), optimal_noise_matrix(profile))
        .expect("reference channel has consistent shapes")
}

/// Clone covariance `diag(I + 2F, I + 2F)` for a coherent input.
pub fn optimal_clone_covariance<T: Scalar>(profile: &NoiseProfile<T>) -> DMatrix<T> {
    let m = profile.m_out();
    let block = DMatrix::identity(m, m) + profile.f_matrix() * T::lit(2.0);
    let zero = DMatrix::zeros(m, m);
    block2(&block, &zero, &zero, &block)
}

/// Concentrates `N` replicas into one mode, `a = Σ a_k / √N`; the other
/// ports of the beam-splitter array are discarded.
pub fn collection_channel<T: Scalar>(n_in: usize) -> GaussianChannel<T> {
    let c = T::one() / T::from_count(n_in).sqrt();
    let mut s = DMatrix::zeros(2, 2 * n_in);
    for k in 0..n_in {
        s[(0, k)] = c;
        s[(1, n_in + k)] = c;
    }
    GaussianChannel::new(s, DMatrix::zeros(2, 2)).expect("collection channel has consistent shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussianState;
    use num_complex::Complex;

    #[test]
    fn symmetric_one_to_two_noise_diagonal_is_one() {
        let p = NoiseProfile::<f64>::symmetric(1, 2).unwrap();
        let g = optimal_noise_matrix(&p);
        for k in 0..4 {
            assert!((g[(k, k)] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn reference_channel_reproduces_clone_covariance() {
        let p = NoiseProfile::new(1, 3, vec![0.5, 0.5, 2.0]).unwrap();
        let ch = optimal_channel(&p);
        let alpha = Complex::new(0.3, 0.2);
        let out = ch.apply(&GaussianState::coherent(&[alpha])).unwrap();
        assert!(crate::linalg::max_abs_diff(out.cov(), &optimal_clone_covariance(&p)) < 1e-14);
        for j in 0..3 {
            assert!((out.amplitude(j) - alpha).norm() < 1e-15);
        }
        // clone 3 diagonal: 1 + 2*2
        assert!((out.cov()[(2, 2)] - 5.0f64).abs() < 1e-14);
    }

    #[test]
    fn collection_preserves_coherence() {
        let alpha = Complex::new(-0.4, 0.9);
        let ch = collection_channel::<f64>(3);
        let out = ch.apply(&GaussianState::coherent_replicas(alpha, 3)).unwrap();
        assert!((out.amplitude(0) - alpha * 3f64.sqrt()).norm() < 1e-14);
        assert!(crate::linalg::max_abs_diff(out.cov(), &DMatrix::identity(2, 2)) < 1e-14);
        assert!(ch.cp_min_eigenvalue() > -1e-12);
    }
}
