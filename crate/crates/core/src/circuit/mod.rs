//! Physical realizations of an optimal cloner.
//!
//! Both schemes act on the single mode `a` into which the `N` input replicas
//! have been collected, which then carries `|√N α>`.

mod amplifier;
mod equivalence;
mod feedforward;
mod reference;

pub use amplifier::{build_interferometer, gain_and_transmittance, AmplifierChecks, AmplifierCircuit};
pub use equivalence::{scheme_equivalence_check, EquivalenceReport};
pub use feedforward::{
    calibrate_phase_convention, feedforward_params, FeedforwardChecks, FeedforwardCircuit, PhaseConvention,
};
pub use reference::{
    collection_channel, first_moment_matrix, optimal_channel, optimal_clone_covariance, optimal_noise_matrix,
};

/// Probe amplitude used to pin down the feedforward phase convention.
pub const CALIBRATION_PROBE: (f64, f64) = (1.0, 0.5);
