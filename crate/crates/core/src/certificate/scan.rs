use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::circuit::optimal_noise_matrix;
use crate::design::{design_from_weights, CostWeights};
use crate::error::{CloneError, Result};
use crate::linalg::{compose_complex, complexify, min_hermitian_eigenvalue};
use crate::scalar::{Scalar, Tolerances};

use super::dual::DualCertificate;
use super::problem::CertifiedProblem;

/// Outcome of sampling feasible noise matrices against the dual bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport<T> {
    pub trials: usize,
    /// Smallest `C̃(G)` over all samples (the first sample is `G_opt`).
    pub min_cost: T,
    pub dual_bound: T,
    /// Smallest `Tr[Z(G + iK)]`; non-negative when `Z ⪰ 0`.
    pub min_dual_slack: T,
    /// Smallest eigenvalue of `G + iK` seen, confirming every sample is CP.
    pub min_feasibility: T,
    /// `C̃(G_opt) - dual_bound`.
    pub saturation_gap: T,
}

impl<T: Scalar> ScanReport<T> {
    pub fn passed(&self, tol: &Tolerances<T>) -> bool {
        self.min_cost >= self.dual_bound - tol.psd && self.min_dual_slack >= -tol.psd
    }
}

/// Samples random `G` with `G + iK ⪰ 0` and evaluates `C̃(G)`.
///
/// Samples are built from noise matrices of other optimal cloners (random
/// weights, same `N` and `M`), passed through symplectic maps that leave
/// `K` invariant (a common phase rotation of all clones, or a common
/// quadrature squeezing), optionally mixed convexly with another sample or
/// with `G_opt`, and finally padded with a random real PSD matrix. Every
/// step keeps `G + iK ⪰ 0`.
pub fn random_feasible_cost_scan<T: Scalar>(
    problem: &CertifiedProblem<T>,
    cert: &DualCertificate<T>,
    trials: usize,
    seed: u64,
) -> Result<ScanReport<T>>
where
    StandardNormal: Distribution<T>,
{
    if trials == 0 {
        return Err(CloneError::InvalidParameter("the cost scan needs at least one trial".into()));
    }
    let m = problem.m_out();
    let n_in = problem.profile.n_in();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kc = compose_complex(&DMatrix::zeros(2 * m, 2 * m), &problem.k);

    let other_optimum = |rng: &mut ChaCha8Rng| -> Result<DMatrix<T>> {
        let x: Vec<T> = (0..m).map(|_| T::lit(10f64.powf(rng.random_range(-1.0..1.0)))).collect();
        let d = design_from_weights(&CostWeights::new(x)?, n_in, m)?;
        Ok(optimal_noise_matrix(&d.profile))
    };
    let transform = |rng: &mut ChaCha8Rng, g: DMatrix<T>| -> DMatrix<T> {
        let theta = T::lit(rng.random_range(0.0..std::f64::consts::TAU));
        let squeeze = T::lit(10f64.powf(rng.random_range(-0.5..0.5)));
        let (c, s) = (theta.cos(), theta.sin());
        let mut t = DMatrix::<T>::zeros(2 * m, 2 * m);
        for j in 0..m {
            t[(j, j)] = c * squeeze;
            t[(j, m + j)] = -s * squeeze;
            t[(m + j, j)] = s / squeeze;
            t[(m + j, m + j)] = c / squeeze;
        }
        &t * g * t.transpose()
    };

    let mut report = ScanReport {
        trials,
        min_cost: T::lit(f64::INFINITY),
        dual_bound: cert.dual_bound,
        min_dual_slack: T::lit(f64::INFINITY),
        min_feasibility: T::lit(f64::INFINITY),
        saturation_gap: problem.matrix_cost(&problem.g_opt) - cert.dual_bound,
    };

    for trial in 0..trials {
        let g = if trial == 0 {
            problem.g_opt.clone()
        } else {
            let mut g = match rng.random_range(0..3) {
                0 => problem.g_opt.clone(),
                _ => {
                    let base = other_optimum(&mut rng)?;
                    transform(&mut rng, base)
                }
            };
            if rng.random_bool(0.5) {
                let p = T::lit(rng.random::<f64>());
                let partner = if rng.random_bool(0.5) {
                    problem.g_opt.clone()
                } else {
                    let base = other_optimum(&mut rng)?;
                    transform(&mut rng, base)
                };
                g = g * p + partner * (T::one() - p);
            }
            if rng.random_bool(0.75) {
                let eps = T::lit(10f64.powf(rng.random_range(-4.0..0.0)));
                let b = DMatrix::<T>::from_fn(2 * m, 2 * m, |_, _| StandardNormal.sample(&mut rng));
                g += &b * b.transpose() * (eps / T::from_count(2 * m));
            }
            g
        };
        let a = compose_complex(&g, &problem.k);
        report.min_feasibility = report.min_feasibility.min(min_hermitian_eigenvalue(&a));
        report.min_cost = report.min_cost.min(problem.matrix_cost(&g));
        let slack = (&cert.z * (complexify(&g) + &kc)).trace().re;
        report.min_dual_slack = report.min_dual_slack.min(slack);
    }
    Ok(report)
}
