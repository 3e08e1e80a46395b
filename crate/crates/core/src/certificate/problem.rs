use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::circuit::{first_moment_matrix, optimal_noise_matrix};
use crate::design::{CostWeights, NoiseProfile};
use crate::error::{CloneError, Result};
use crate::gaussian::GaussianChannel;
use crate::linalg::{block2, compose_complex};
use crate::scalar::{Scalar, Tolerances};

/// Extremal-equation residual tolerance, relative to the largest term.
const EXTREMAL_TOL: f64 = 1e-8;

/// All matrices entering the optimality proof for one design point.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedProblem<T: Scalar> {
    pub profile: NoiseProfile<T>,
    /// Weights with the Lagrange multiplier recovered from the profile.
    pub weights: CostWeights<T>,
    pub g_opt: DMatrix<T>,
    /// `A_opt = G_opt + iK`.
    pub a_opt: DMatrix<Complex<T>>,
    pub k: DMatrix<T>,
    pub f_mat: DMatrix<T>,
    pub h_mat: DMatrix<T>,
    pub f_vec: DVector<T>,
    pub h_vec: DVector<T>,
}

/// Assembles `G_opt`, `K`, `A_opt`, `F = |f><f|`, `H = |h><h|` and recovers
/// `λ` from the extremal equations `x_j √n_j + λ(S - (M-N)√n_j) = 0` by least
/// squares, rejecting weights for which they do not hold.
pub fn build_problem<T: Scalar>(
    profile: &NoiseProfile<T>,
    weights: &CostWeights<T>,
    tol: &Tolerances<T>,
) -> Result<CertifiedProblem<T>> {
    profile.require_optimal(tol)?;
    let m = profile.m_out();
    if weights.len() != m {
        return Err(CloneError::DimensionMismatch(format!("expected {m} weights, got {}", weights.len())));
    }
    if m == profile.n_in() {
        return Err(CloneError::InvalidParameter("no certificate for the identity cloner (M = N)".into()));
    }
    let lambda = extremal_multiplier(profile, weights)?;

    let s = first_moment_matrix::<T>(profile.n_in(), m);
    let g_opt = optimal_noise_matrix(profile);
    let channel = GaussianChannel::new(s, g_opt.clone())?;
    let k = channel.k_matrix();
    let a_opt = compose_complex(&g_opt, &k);
    let f_vec = profile.f_vector();
    let h_vec = DVector::from_element(m, T::one());
    Ok(CertifiedProblem {
        profile: profile.clone(),
        weights: weights.clone().with_lambda(lambda),
        g_opt,
        a_opt,
        k,
        f_mat: &f_vec * f_vec.transpose(),
        h_mat: &h_vec * h_vec.transpose(),
        f_vec,
        h_vec,
    })
}

fn extremal_multiplier<T: Scalar>(profile: &NoiseProfile<T>, weights: &CostWeights<T>) -> Result<T> {
    let s = profile.sqrt_sum();
    let excess = profile.excess();
    let (lhs, rhs): (Vec<T>, Vec<T>) = profile
        .noises()
        .iter()
        .zip(weights.weights())
        .map(|(&n, &x)| (x * n.sqrt(), s - excess * n.sqrt()))
        .unzip();
    let num = lhs.iter().zip(&rhs).fold(T::zero(), |acc, (&a, &b)| acc + a * b);
    let den = rhs.iter().fold(T::zero(), |acc, &b| acc + b * b);
    if !(den > T::zero()) {
        return Err(CloneError::WeightMismatch(f64::INFINITY));
    }
    let lambda = -num / den;
    let scale = lhs.iter().chain(&rhs).fold(T::zero(), |acc, v| acc.max(v.abs())) * T::one().max(lambda.abs());
    let worst = lhs.iter().zip(&rhs).fold(T::zero(), |acc, (&a, &b)| acc.max((a + lambda * b).abs()));
    let allowed = T::lit(EXTREMAL_TOL).max(T::default_epsilon() * T::lit(1e4));
    if worst > allowed * T::one().max(scale) {
        return Err(CloneError::WeightMismatch(worst.as_f64()));
    }
    if !(lambda < T::zero()) {
        return Err(CloneError::InvalidMultiplier(lambda.as_f64()));
    }
    Ok(lambda)
}

impl<T: Scalar> CertifiedProblem<T> {
    pub fn m_out(&self) -> usize {
        self.profile.m_out()
    }

    pub fn lambda(&self) -> T {
        self.weights.lambda().expect("set by build_problem")
    }

    /// `C̃(G) = Σ_j x_j (G_jj + G_{M+j,M+j})`.
    pub fn matrix_cost(&self, g: &DMatrix<T>) -> T {
        let m = self.m_out();
        self.weights
            .weights()
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (j, &x)| acc + x * (g[(j, j)] + g[(m + j, m + j)]))
    }

    /// `C = Σ x_j n_j`.
    pub fn noise_cost(&self) -> T {
        self.weights.cost(&self.profile)
    }

    /// Constant `c` in `C̃(G) = 4 C(n) + c`, from
    /// `n_j = (G_jj + G_{M+j,M+j} + 2/N - 2)/4`.
    pub fn affine_offset(&self) -> T {
        let sum_x = self.weights.weights().iter().fold(T::zero(), |acc, &x| acc + x);
        (T::lit(2.0) - T::lit(2.0) / T::from_count(self.profile.n_in())) * sum_x
    }

    /// `U = (1/√2) [[I, iI], [iI, I]]`.
    pub fn block_diagonalizer(&self) -> DMatrix<Complex<T>> {
        let m = self.m_out();
        let c = T::inv_sqrt2();
        let id = DMatrix::<Complex<T>>::identity(m, m) * Complex::new(c, T::zero());
        let iid = DMatrix::<Complex<T>>::identity(m, m) * Complex::new(T::zero(), c);
        block2(&id, &iid, &iid, &id)
    }

    /// `I - H/N`.
    pub fn q_matrix(&self) -> DMatrix<T> {
        let m = self.m_out();
        DMatrix::identity(m, m) - &self.h_mat / T::from_count(self.profile.n_in())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::design_from_weights;
    use crate::linalg::{complexify, max_abs_complex, min_hermitian_eigenvalue};

    fn symmetric_problem() -> CertifiedProblem<f64> {
        let p = NoiseProfile::symmetric(1, 2).unwrap();
        build_problem(&p, &CostWeights::uniform(2), &Tolerances::default()).unwrap()
    }

    #[test]
    fn symmetric_a_opt_is_psd_and_singular() {
        let pr = symmetric_problem();
        let min = min_hermitian_eigenvalue(&pr.a_opt);
        assert!(min.abs() < 1e-10);
        assert!((pr.lambda() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn a_opt_block_diagonalizes() {
        let d = design_from_weights(&CostWeights::new(vec![1.0, 3.0, 0.5]).unwrap(), 1, 3).unwrap();
        let pr = build_problem(&d.profile, &d.weights, &Tolerances::default()).unwrap();
        let u = pr.block_diagonalizer();
        let got = &u * &pr.a_opt * u.adjoint();
        let f2 = &pr.f_mat * 2.0;
        let q = pr.q_matrix();
        let zero = DMatrix::zeros(3, 3);
        let expect = complexify(&block2(&(&f2 + &q * 2.0), &zero, &zero, &f2));
        assert!(max_abs_complex(&(got - expect)) < 1e-12);
    }

    #[test]
    fn gram_matrix_is_psd() {
        let pr = symmetric_problem();
        assert!(crate::linalg::min_symmetric_eigenvalue(&pr.f_mat) > -1e-15);
    }

    #[test]
    fn mismatched_weights_rejected() {
        let p = NoiseProfile::symmetric(1, 2).unwrap();
        let w = CostWeights::new(vec![1.0, 2.0]).unwrap();
        assert!(matches!(build_problem(&p, &w, &Tolerances::default()), Err(CloneError::WeightMismatch(_))));
    }

    #[test]
    fn off_surface_rejected() {
        let p = NoiseProfile::new(1, 2, vec![0.5, 0.6]).unwrap();
        let err = build_problem(&p, &CostWeights::uniform(2), &Tolerances::default());
        assert!(matches!(err, Err(CloneError::OffSurface { .. })));
    }

    #[test]
    fn affine_map_between_costs() {
        let d = design_from_weights(&CostWeights::new(vec![1.0, 3.0, 0.5]).unwrap(), 2, 3).unwrap();
        let pr = build_problem(&d.profile, &d.weights, &Tolerances::default()).unwrap();
        let lhs = pr.matrix_cost(&pr.g_opt);
        let rhs: f64 = 4.0 * pr.noise_cost() + pr.affine_offset();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
