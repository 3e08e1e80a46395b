use nalgebra::{DMatrix, DVector};

use crate::scalar::Scalar;

/// Streaming mean and co-moment matrix (Welford), mergeable across shards.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentAccumulator<T: Scalar> {
    count: u64,
    mean: DVector<T>,
    comoment: DMatrix<T>,
}

impl<T: Scalar> MomentAccumulator<T> {
    pub fn new(dim: usize) -> Self {
        Self { count: 0, mean: DVector::zeros(dim), comoment: DMatrix::zeros(dim, dim) }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> &DVector<T> {
        &self.mean
    }

    pub fn push(&mut self, sample: &[T]) {
        self.count += 1;
        let n = T::lit(self.count as f64);
        let dim = self.mean.len();
        let delta: Vec<T> = (0..dim).map(|i| sample[i] - self.mean[i]).collect();
        for i in 0..dim {
            self.mean[i] += delta[i] / n;
        }
        for i in 0..dim {
            let after = sample[i] - self.mean[i];
            for j in 0..dim {
                self.comoment[(i, j)] += after * delta[j];
            }
        }
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, other: &Self) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (T::lit(self.count as f64), T::lit(other.count as f64));
        let n = na + nb;
        let delta = &other.mean - &self.mean;
        self.mean += &delta * (nb / n);
        self.comoment += &other.comoment + &delta * delta.transpose() * (na * nb / n);
        self.count += other.count;
    }

    /// Unbiased sample covariance.
    pub fn covariance(&self) -> DMatrix<T> {
        if self.count < 2 {
            return DMatrix::from_element(self.mean.len(), self.mean.len(), T::lit(f64::NAN));
        }
        let c = &self.comoment / T::lit((self.count - 1) as f64);
        // exact symmetry regardless of summation order
        (&c + c.transpose()) / T::lit(2.0)
    }
}
