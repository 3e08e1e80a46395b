use nalgebra::{DMatrix, DVector};

use crate::error::{CloneError, Result};
use crate::scalar::{Scalar, Tolerances};

/// Per-clone thermal noises of an `N -> M` cloner.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseProfile<T: Scalar> {
    n_in: usize,
    m_out: usize,
    noises: Vec<T>,
    n_tot: T,
}

impl<T: Scalar> NoiseProfile<T> {
    pub fn new(n_in: usize, m_out: usize, noises: Vec<T>) -> Result<Self> {
        if n_in == 0 {
            return Err(CloneError::InvalidParameter("number of input replicas must be at least 1".into()));
        }
        if m_out < n_in {
            return Err(CloneError::InvalidParameter(format!(
                "number of clones ({m_out}) must be at least the number of inputs ({n_in})"
            )));
        }
        if noises.len() != m_out {
            return Err(CloneError::DimensionMismatch(format!(
                "expected {m_out} noises, got {}",
                noises.len()
            )));
        }
        if let Some((index, value)) =
            noises.iter().enumerate().find(|(_, v)| !(**v >= T::zero()) || !v.is_finite())
        {
            return Err(CloneError::NegativeNoise { index, value: value.as_f64() });
        }
        let n_tot = noises.iter().fold(T::zero(), |acc, &v| acc + v);
        Ok(Self { n_in, m_out, noises, n_tot })
    }

    /// The symmetric optimal cloner, `n_j = (M - N)/(MN)` for all clones.
    pub fn symmetric(n_in: usize, m_out: usize) -> Result<Self> {
        if n_in == 0 || m_out < n_in {
            return Err(CloneError::InvalidParameter(format!(
                "symmetric cloner needs M >= N >= 1, got N = {n_in}, M = {m_out}"
            )));
        }
        let n = T::from_count(m_out - n_in) / T::from_count(m_out * n_in);
        Self::new(n_in, m_out, vec![n; m_out])
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn m_out(&self) -> usize {
        self.m_out
    }

    pub fn noises(&self) -> &[T] {
        &self.noises
    }

    pub fn n_tot(&self) -> T {
        self.n_tot
    }

    /// `M - N` as a scalar.
    pub fn excess(&self) -> T {
        T::from_count(self.m_out - self.n_in)
    }

    pub fn sqrt_sum(&self) -> T {
        self.noises.iter().fold(T::zero(), |acc, v| acc + v.sqrt())
    }

    /// `(Σ √n_k)² - (M - N)(Σ n_j + 1)`; zero on the optimal surface.
    pub fn residual(&self) -> T {
        let s = self.sqrt_sum();
        s * s - self.excess() * (self.n_tot + T::one())
    }

    /// Magnitude the residual is compared against.
    pub fn residual_scale(&self) -> T {
        T::one().max(self.excess() * (self.n_tot + T::one()))
    }

    /// Whether the profile satisfies the noise condition within `tol`.
    pub fn is_optimal(&self, tol: &Tolerances<T>) -> bool {
        self.residual().abs() <= tol.algebraic * self.residual_scale()
    }

    pub fn require_optimal(&self, tol: &Tolerances<T>) -> Result<()> {
        if self.is_optimal(tol) {
            Ok(())
        } else {
            Err(CloneError::OffSurface {
                residual: self.residual().as_f64(),
                tolerance: (tol.algebraic * self.residual_scale()).as_f64(),
            })
        }
    }

    pub fn fidelities(&self) -> Vec<T> {
        self.noises.iter().map(|&n| T::one() / (T::one() + n)).collect()
    }

    /// `|f> = (√n_1, .., √n_M)`.
    pub fn f_vector(&self) -> DVector<T> {
        DVector::from_iterator(self.m_out, self.noises.iter().map(|v| v.sqrt()))
    }

    /// `F_jk = √(n_j n_k)`.
    pub fn f_matrix(&self) -> DMatrix<T> {
        let f = self.f_vector();
        &f * f.transpose()
    }

    /// `I - H/N + F`, the Gram matrix of the auxiliary-mode couplings.
    pub fn coupling_gram(&self) -> DMatrix<T> {
        let m = self.m_out;
        let inv_n = T::one() / T::from_count(self.n_in);
        DMatrix::identity(m, m) - DMatrix::from_element(m, m, inv_n) + self.f_matrix()
    }

    /// Removes one perfect (zero-noise) clone, giving an `(N-1) -> (M-1)`
    /// profile with the same residual.
    pub fn reduce_perfect_clone(&self, tol: &Tolerances<T>) -> Result<Self> {
        let (index, _) = self
            .noises
            .iter()
            .enumerate()
            .filter(|(_, v)| **v <= tol.algebraic)
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
            .ok_or(CloneError::NoPerfectClone)?;
        if self.n_in < 2 {
            return Err(CloneError::InvalidParameter(
                "removing a perfect clone would leave zero input replicas".into(),
            ));
        }
        let mut noises = self.noises.clone();
        noises.remove(index);
        Self::new(self.n_in - 1, self.m_out - 1, noises)
    }
}

/// Both solutions for the last clone's noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LastNoiseRoots<T> {
    /// Smallest non-negative root: the maximal fidelity of the last clone.
    pub optimal: T,
    /// The other non-negative root, when there is one.
    pub other: Option<T>,
}

/// Noise of the `M`-th clone that puts the profile on the optimal surface
/// given the other `M - 1` noises, choosing the highest-fidelity solution.
pub fn solve_last_noise<T: Scalar>(partial: &[T], n_in: usize, m_out: usize) -> Result<T> {
    last_noise_roots(partial, n_in, m_out).map(|r| r.optimal)
}

/// With `s = Σ √n_k`, `T = Σ n_k` over the given clones and `u = √n_M`, the
/// noise condition reads `(M-N-1) u² - 2 s u + (M-N)(T+1) - s² = 0`.
pub fn last_noise_roots<T: Scalar>(partial: &[T], n_in: usize, m_out: usize) -> Result<LastNoiseRoots<T>> {
    if n_in == 0 || m_out <= n_in {
        return Err(CloneError::InvalidParameter(format!(
            "solving for the last clone needs M > N >= 1, got N = {n_in}, M = {m_out}"
        )));
    }
    if partial.len() + 1 != m_out {
        return Err(CloneError::DimensionMismatch(format!(
            "expected {} given noises, got {}",
            m_out - 1,
            partial.len()
        )));
    }
    if let Some((index, value)) = partial.iter().enumerate().find(|(_, v)| !(**v >= T::zero()) || !v.is_finite()) {
        return Err(CloneError::NegativeNoise { index, value: value.as_f64() });
    }
    let s = partial.iter().fold(T::zero(), |acc, v| acc + v.sqrt());
    let total = partial.iter().fold(T::zero(), |acc, &v| acc + v);
    let excess = T::from_count(m_out - n_in);
    let a = excess - T::one();
    let c = excess * (total + T::one()) - s * s;
    let too_good = || {
        CloneError::Infeasible(
            "the requested fidelities of the other clones are too high for any last clone".into(),
        )
    };

    if m_out - n_in == 1 {
        // linear: -2 s u + c = 0
        if s <= T::zero() {
            return Err(too_good());
        }
        let u = c / (T::lit(2.0) * s);
        if u < T::zero() {
            return Err(too_good());
        }
        return Ok(LastNoiseRoots { optimal: u * u, other: None });
    }

    let disc = s * s - a * c;
    // a discriminant within rounding of zero is a double root
    let slack = T::default_epsilon() * T::lit(16.0) * (s * s).max((a * c).abs());
    if disc.abs() <= slack {
        let u = s / a;
        return if u >= T::zero() { Ok(LastNoiseRoots { optimal: u * u, other: None }) } else { Err(too_good()) };
    } else if disc < T::zero() {
        return Err(too_good());
    }
    let sq = disc.sqrt();
    let large = (s + sq) / a;
    // s - sq computed as c / (s + sq) to avoid cancellation
    let small = if s + sq > T::zero() { c / (s + sq) } else { T::zero() };
    let mut roots: Vec<T> = [small, large].into_iter().filter(|u| *u >= T::zero()).collect();
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    match roots.as_slice() {
        [] => Err(too_good()),
        [u] => Ok(LastNoiseRoots { optimal: *u * *u, other: None }),
        [u, v, ..] => Ok(LastNoiseRoots { optimal: *u * *u, other: Some(*v * *v) }),
    }
}
