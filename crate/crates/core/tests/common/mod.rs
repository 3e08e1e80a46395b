//! Closed-form reference values computed without the library's own
//! matrices, shared by the integration tests.
#![allow(dead_code)]

use gaussclone::{design_from_weights, CostWeights, NoiseProfile};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use rand::Rng;

/// `√n_j = c w_j`-free check of the noise condition, summed in a
/// different order from the library.
pub fn residual(noises: &[f64], n_in: usize) -> f64 {
    let m = noises.len();
    let s: f64 = noises.iter().rev().map(|n| n.sqrt()).sum();
    let t: f64 = noises.iter().rev().sum();
    s * s - (m - n_in) as f64 * (t + 1.0)
}

/// First-moment matrix on the collected mode `|√N α>`: every clone
/// quadrature is the collected quadrature scaled by `1/√N`.
pub fn s_matrix(n_in: usize, m_out: usize) -> DMatrix<f64> {
    let c = 1.0 / (n_in as f64).sqrt();
    let mut s = DMatrix::zeros(2 * m_out, 2);
    for j in 0..m_out {
        s[(j, 0)] = c;
        s[(m_out + j, 1)] = c;
    }
    s
}

/// `diag(B, B)` with `B_jk = δ_jk + 2√(n_j n_k) - 1/N`.
pub fn g_opt(noises: &[f64], n_in: usize) -> DMatrix<f64> {
    let m = noises.len();
    let mut g = DMatrix::zeros(2 * m, 2 * m);
    for j in 0..m {
        for k in 0..m {
            let b = if j == k { 1.0 } else { 0.0 } + 2.0 * (noises[j] * noises[k]).sqrt() - 1.0 / n_in as f64;
            g[(j, k)] = b;
            g[(m + j, m + k)] = b;
        }
    }
    g
}

/// Clone covariance for coherent inputs: `diag(B, B)` with
/// `B_jk = δ_jk + 2√(n_j n_k)`.
pub fn clone_cov(noises: &[f64]) -> DMatrix<f64> {
    let m = noises.len();
    let mut g = DMatrix::zeros(2 * m, 2 * m);
    for j in 0..m {
        for k in 0..m {
            let b = if j == k { 1.0 } else { 0.0 } + 2.0 * (noises[j] * noises[k]).sqrt();
            g[(j, k)] = b;
            g[(m + j, m + k)] = b;
        }
    }
    g
}

pub fn omega(modes: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * modes, 2 * modes);
    for i in 0..modes {
        j[(i, modes + i)] = 1.0;
        j[(modes + i, i)] = -1.0;
    }
    j
}

/// `K = J_out - S J_in S^T`.
pub fn k_matrix(n_in: usize, m_out: usize) -> DMatrix<f64> {
    let s = s_matrix(n_in, m_out);
    omega(m_out) - &s * omega(1) * s.transpose()
}

/// Smallest eigenvalue of the Hermitian matrix `A + iB` via the real
/// symmetric embedding `[[A, -B], [B, A]]` (same spectrum, doubled).
pub fn hermitian_min_eig(h: &DMatrix<Complex<f64>>) -> f64 {
    let n = h.nrows();
    let mut r = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            r[(i, j)] = z.re;
            r[(n + i, n + j)] = z.re;
            r[(i, n + j)] = -z.im;
            r[(n + i, j)] = z.im;
        }
    }
    let sym = (&r + r.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn compose(re: &DMatrix<f64>, im: &DMatrix<f64>) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| Complex::new(re[(i, j)], im[(i, j)]))
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Random Pareto-optimal profile with `2 <= M <= max_m`, `1 <= N < M`
/// and weights drawn log-uniformly from `[0.1, 10]`.
pub fn random_optimal_profile<R: Rng>(rng: &mut R, max_m: usize) -> (NoiseProfile<f64>, CostWeights<f64>) {
    let m = rng.random_range(2..=max_m);
    let n = rng.random_range(1..m);
    let w: Vec<f64> = (0..m).map(|_| 10f64.powf(rng.random_range(-1.0..=1.0))).collect();
    let d = design_from_weights(&CostWeights::new(w).unwrap(), n, m).unwrap();
    (d.profile, d.weights)
}

pub fn random_alpha<R: Rng>(rng: &mut R) -> Complex<f64> {
    Complex::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))
}
