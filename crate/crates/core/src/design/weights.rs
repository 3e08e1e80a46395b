use crate::error::{CloneError, Result};
use crate::scalar::Scalar;

use super::profile::NoiseProfile;

/// Positive weights `x_j` of the linear cost `Σ x_j n_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostWeights<T: Scalar> {
    weights: Vec<T>,
    lambda: Option<T>,
}

impl<T: Scalar> CostWeights<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(CloneError::InvalidParameter("weight vector is empty".into()));
        }
        if let Some((j, w)) = weights.iter().enumerate().find(|(_, w)| !(**w > T::zero()) || !w.is_finite()) {
            return Err(CloneError::InvalidParameter(format!(
                "weight {} = {} is not strictly positive",
                j + 1,
                w.as_f64()
            )));
        }
        Ok(Self { weights, lambda: None })
    }

    pub fn uniform(m_out: usize) -> Self {
        Self { weights: vec![T::one(); m_out], lambda: None }
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Lagrange multiplier of the solved design, if any.
    pub fn lambda(&self) -> Option<T> {
        self.lambda
    }

    pub fn with_lambda(mut self, lambda: T) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn cost(&self, profile: &NoiseProfile<T>) -> T {
        self.weights.iter().zip(profile.noises()).fold(T::zero(), |acc, (&x, &n)| acc + x * n)
    }

    /// Weights for which `profile` is the cost minimizer, normalized to
    /// `λ = -1`: `x_j = S/√n_j - (M - N)`. Needs every `n_j > 0` and
    /// `(M - N)√n_j < S`.
    pub fn supporting(profile: &NoiseProfile<T>) -> Result<Self> {
        if profile.m_out() <= profile.n_in() {
            return Err(CloneError::InvalidParameter("supporting weights need M > N".into()));
        }
        let s = profile.sqrt_sum();
        let excess = profile.excess();
        let weights = profile
            .noises()
            .iter()
            .map(|&n| if n > T::zero() { s / n.sqrt() - excess } else { T::zero() })
            .collect();
        Ok(Self::new(weights)
            .map_err(|_| {
                CloneError::Infeasible(
                    "profile is not the minimizer of any strictly positive weighting".into(),
                )
            })?
            .with_lambda(-T::one()))
    }
}

/// Profile minimizing `Σ x_j n_j` on the optimal surface, together with the
/// weights carrying the solved Lagrange multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDesign<T: Scalar> {
    pub profile: NoiseProfile<T>,
    pub weights: CostWeights<T>,
}

/// Solves the extremal equations
/// `x_j √n_j - λ(M-N)√n_j + λ Σ_k √n_k = 0` together with the noise condition.
///
/// With `μ = -λ > 0` the extremal equations give `√n_j = S w_j`,
/// `w_j = μ / (μ(M-N) + x_j)`, and `S` cancels to the scalar condition
/// `Σ_j w_j = 1`, which is increasing in `μ`. The root is bracketed on a
/// log grid and bisected; the overall scale then follows from the noise
/// condition.
pub fn design_from_weights<T: Scalar>(
    weights: &CostWeights<T>,
    n_in: usize,
    m_out: usize,
) -> Result<WeightedDesign<T>> {
    if n_in == 0 || m_out < n_in {
        return Err(CloneError::InvalidParameter(format!(
            "design needs M >= N >= 1, got N = {n_in}, M = {m_out}"
        )));
    }
    if weights.len() != m_out {
        return Err(CloneError::DimensionMismatch(format!(
            "expected {m_out} weights, got {}",
            weights.len()
        )));
    }
    if m_out == n_in {
        return Ok(WeightedDesign {
            profile: NoiseProfile::new(n_in, m_out, vec![T::zero(); m_out])?,
            weights: weights.clone(),
        });
    }

    let excess = T::from_count(m_out - n_in);
    let x = weights.weights();
    let consistency = |mu: T| x.iter().fold(T::zero(), |acc, &xj| acc + mu / (mu * excess + xj)) - T::one();

    const GRID: usize = 181;
    let (log_lo, log_hi) = (-6.0f64, 3.0f64);
    let grid = |i: usize| T::lit(10f64.powf(log_lo + (log_hi - log_lo) * i as f64 / (GRID - 1) as f64));
    let mut bracket = None;
    let mut prev = (grid(0), consistency(grid(0)));
    if prev.1 == T::zero() {
        bracket = Some((prev.0, prev.0));
    }
    for i in 1..GRID {
        if bracket.is_some() {
            break;
        }
        let mu = grid(i);
        let val = consistency(mu);
        if prev.1 < T::zero() && val >= T::zero() {
            bracket = Some((prev.0, mu));
        }
        prev = (mu, val);
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| {
        CloneError::NoBracket(format!(
            "Σ w_j - 1 = {:e} at λ = -1e-6 and {:e} at λ = -1e3; weights outside the searchable range",
            consistency(grid(0)).as_f64(),
            consistency(grid(GRID - 1)).as_f64()
        ))
    })?;

    let rel = T::lit(1e-12);
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if hi - lo <= rel * hi || mid == lo || mid == hi {
            break;
        }
        if consistency(mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = (lo + hi) / T::lit(2.0);

    let w: Vec<T> = x.iter().map(|&xj| mu / (mu * excess + xj)).collect();
    let sum_w = w.iter().fold(T::zero(), |acc, &v| acc + v);
    let sum_w2 = w.iter().fold(T::zero(), |acc, &v| acc + v * v);
    // scale c with √n_j = c w_j, fixed by the noise condition itself so the
    // residual vanishes even if Σ w_j differs from 1 by the bisection error
    let denom = sum_w * sum_w - excess * sum_w2;
    if !(denom > T::zero()) {
        return Err(CloneError::NoBracket(format!(
            "degenerate normalization (Σw)² - (M-N)Σw² = {:e}",
            denom.as_f64()
        )));
    }
    let c2 = excess / denom;
    let noises = w.iter().map(|&v| c2 * v * v).collect();
    let profile = NoiseProfile::new(n_in, m_out, noises)?;
    Ok(WeightedDesign { profile, weights: weights.clone().with_lambda(-mu) })
}
