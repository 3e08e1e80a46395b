use nalgebra::ComplexField;
use num_complex::Complex;

use crate::design::NoiseProfile;
use crate::error::Result;
use crate::gaussian::GaussianState;
use crate::linalg::{max_abs_diff, max_abs_diff_vec};
use crate::scalar::{Scalar, Tolerances};

use super::amplifier::build_interferometer;
use super::feedforward::feedforward_params;
use super::reference::optimal_clone_covariance;

/// Discrepancies between the two realizations of one profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceReport<T> {
    /// `max` entry-wise difference of `(S, G)` between the schemes.
    pub channel_discrepancy: T,
    /// `max` entry-wise difference of output mean and covariance.
    pub state_discrepancy: T,
    /// Largest deviation of either output covariance from `diag(I+2F, I+2F)`.
    pub reference_discrepancy: T,
    /// Largest deviation of any clone amplitude from the probe.
    pub mean_error: T,
}

impl<T: Scalar> EquivalenceReport<T> {
    pub const THRESHOLD: f64 = 1e-9;

    pub fn max_discrepancy(&self) -> T {
        self.channel_discrepancy
            .max(self.state_discrepancy)
            .max(self.reference_discrepancy)
            .max(self.mean_error)
    }

    pub fn passed(&self) -> bool {
        self.max_discrepancy() < T::lit(Self::THRESHOLD)
    }
}

/// Builds both circuits and compares the Gaussian states they produce from
/// `N` replicas of `|probe>`.
pub fn scheme_equivalence_check<T: Scalar>(
    profile: &NoiseProfile<T>,
    probe: Complex<T>,
    tol: &Tolerances<T>,
) -> Result<EquivalenceReport<T>> {
    profile.require_optimal(tol)?;
    let amp = build_interferometer(profile, tol)?.replica_channel()?;
    let ff = feedforward_params(profile, tol)?.replica_channel()?;
    let channel_discrepancy = max_abs_diff(amp.s(), ff.s()).max(max_abs_diff(amp.g(), ff.g()));

    let input = GaussianState::coherent_replicas(probe, profile.n_in());
    let out_amp = amp.apply(&input)?;
    let out_ff = ff.apply(&input)?;
    let state_discrepancy = max_abs_diff_vec(out_amp.mean(), out_ff.mean()).max(max_abs_diff(out_amp.cov(), out_ff.cov()));

    let reference = optimal_clone_covariance(profile);
    let reference_discrepancy = max_abs_diff(out_amp.cov(), &reference).max(max_abs_diff(out_ff.cov(), &reference));
    let mean_error = (0..profile.m_out())
        .flat_map(|j| [out_amp.amplitude(j), out_ff.amplitude(j)])
        .fold(T::zero(), |acc, a| acc.max((a - probe).modulus()));

    Ok(EquivalenceReport { channel_discrepancy, state_discrepancy, reference_discrepancy, mean_error })
}
