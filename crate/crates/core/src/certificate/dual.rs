use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;

use crate::error::{CloneError, Result};
use crate::linalg::{asymmetry, block2, complexify, max_abs, max_abs_complex, min_hermitian_eigenvalue};
use crate::scalar::Scalar;

use super::problem::CertifiedProblem;

/// Pass threshold shared by every certificate check.
const PASS: f64 = 1e-9;

/// `Z = [[X, iY], [-iY, X]]` with `X = diag(x)` and
/// `Y = -X - 2η XFX`, `η = 1/(λ(M-N))`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate<T: Scalar> {
    pub x: DMatrix<T>,
    pub y: DMatrix<T>,
    pub z: DMatrix<Complex<T>>,
    pub lambda: T,
    pub eta: T,
    /// `-i Tr[ZK]`, a lower bound on `C̃(G)` for every CP channel.
    pub dual_bound: T,
}

pub fn build_certificate<T: Scalar>(problem: &CertifiedProblem<T>) -> Result<DualCertificate<T>> {
    let lambda = problem.lambda();
    if !(lambda < T::zero()) {
        return Err(CloneError::InvalidMultiplier(lambda.as_f64()));
    }
    let eta = T::one() / (lambda * problem.profile.excess());
    let x = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(problem.weights.weights()));
    let xfx = &x * &problem.f_mat * &x;
    let y = -&x - xfx * (T::lit(2.0) * eta);
    let i = Complex::new(T::zero(), T::one());
    let xc = complexify(&x);
    let iy = complexify(&y) * i;
    let z = block2(&xc, &iy, &(-&iy), &xc);
    let kc = complexify(&problem.k);
    let dual_bound = ((&z * &kc).trace() * (-i)).re;
    Ok(DualCertificate { x, y, z, lambda, eta, dual_bound })
}

/// Residuals of every identity the certificate must satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport<T> {
    /// `|Tr[Z G_opt] - C̃(G_opt)|`.
    pub trace_cost_discrepancy: T,
    /// `max|Z A_opt| / (max|Z| max|A_opt|)`.
    pub complementarity: T,
    pub z_min_eigenvalue: T,
    pub a_opt_min_eigenvalue: T,
    /// `|C̃(G_opt) - dual_bound|`.
    pub duality_gap: T,
    /// `|η Tr[X^{1/2} F X^{1/2}] + 1|`.
    pub normalization_error: T,
    pub y_asymmetry: T,
    /// `max|Y(I - H/N) + X(I + 2F - H/N)|`.
    pub y_linear_constraint: T,
    /// `max|XF - YF|`.
    pub y_f_constraint: T,
    /// `max|XF(I - H/(M-N)) - η XFX|`.
    pub extremal_identity: T,
    /// `max|Φ² - Φ|` with `Φ = -η X^{1/2} F X^{1/2}`.
    pub projector_error: T,
    /// `max|U Z̃ U† - diag(2Φ, 2I - 2Φ)|`, `Z̃ = diag(X^{-1/2}, X^{-1/2}) Z (..)`.
    pub block_diagonal_error: T,
    pub primal_cost: T,
    pub dual_bound: T,
    /// `C = Σ x_j n_j`.
    pub noise_cost: T,
    /// `c` in `C̃ = 4C + c`.
    pub affine_offset: T,
}

impl<T: Scalar> CertificateReport<T> {
    pub fn passed(&self) -> bool {
        let pass = T::lit(PASS);
        self.trace_cost_discrepancy < pass
            && self.complementarity < pass
            && self.z_min_eigenvalue >= -pass
            && self.duality_gap < pass
            && self.normalization_error < pass
            && self.y_asymmetry < pass
    }
}

pub fn verify_certificate<T: Scalar>(problem: &CertifiedProblem<T>, cert: &DualCertificate<T>) -> CertificateReport<T> {
    let m = problem.m_out();
    let two = T::lit(2.0);
    let id = DMatrix::<T>::identity(m, m);
    let f = &problem.f_mat;
    let q = problem.q_matrix();

    let primal_cost = problem.matrix_cost(&problem.g_opt);
    let trace_zg = (&cert.z * complexify(&problem.g_opt)).trace();
    let trace_cost_discrepancy = (trace_zg - Complex::new(primal_cost, T::zero())).modulus();

    let za = &cert.z * &problem.a_opt;
    let denom = T::one().max(max_abs_complex(&cert.z) * max_abs_complex(&problem.a_opt));
    let complementarity = max_abs_complex(&za) / denom;

    let x_sqrt = cert.x.map(|v| v.max(T::zero()).sqrt());
    let x_inv_sqrt = cert.x.map(|v| if v > T::zero() { T::one() / v.sqrt() } else { T::zero() });
    let xfx_half = &x_sqrt * f * &x_sqrt;
    let normalization_error = (cert.eta * xfx_half.trace() + T::one()).abs();
    let phi = &xfx_half * (-cert.eta);
    let projector_error = max_abs(&(&phi * &phi - &phi));

    let zero = DMatrix::<T>::zeros(m, m);
    let v = complexify(&block2(&x_inv_sqrt, &zero, &zero, &x_inv_sqrt));
    let z_tilde = &v * &cert.z * v.adjoint();
    let u = problem.block_diagonalizer();
    let expect = complexify(&block2(&(&phi * two), &zero, &zero, &((&id - &phi) * two)));
    let block_diagonal_error = max_abs_complex(&(&u * z_tilde * u.adjoint() - expect));

    let xf = &cert.x * f;
    let excess = problem.profile.excess();
    let extremal_identity =
        max_abs(&(&xf * (&id - &problem.h_mat / excess) - &xf * &cert.x * cert.eta));

    CertificateReport {
        trace_cost_discrepancy,
        complementarity,
        z_min_eigenvalue: min_hermitian_eigenvalue(&cert.z),
        a_opt_min_eigenvalue: min_hermitian_eigenvalue(&problem.a_opt),
        duality_gap: (primal_cost - cert.dual_bound).abs(),
        normalization_error,
        y_asymmetry: asymmetry(&cert.y),
        y_linear_constraint: max_abs(&(&cert.y * &q + &cert.x * (&q + f * two))),
        y_f_constraint: max_abs(&(&xf - &cert.y * f)),
        extremal_identity,
        projector_error,
        block_diagonal_error,
        primal_cost,
        dual_bound: cert.dual_bound,
        noise_cost: problem.noise_cost(),
        affine_offset: problem.affine_offset(),
    }
}
