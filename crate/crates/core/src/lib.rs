//! Optimal asymmetric Gaussian cloning of coherent states.
//!
//! A cloner takes `N` identical copies of an unknown coherent state `|α>` to
//! `M >= N` clones, each an isotropic thermal-displaced state `|α>` with
//! excess noise `n_j`. The optimal trade-off surface is
//! `(Σ √n_j)² = (M - N)(Σ n_j + 1)`.
//!
//! The crate covers the Gaussian-channel algebra ([`gaussian`]), designing
//! noise profiles from cost weights ([`design`]), two circuit realizations
//! ([`circuit`]), an optimality certificate ([`certificate`]) and a
//! shot-level Monte Carlo of the measurement-based scheme ([`simulation`]).
//!
//! Every numeric type is generic over [`Scalar`] (implemented for `f32` and
//! `f64`); `*F64` aliases are provided for the common case.

pub mod certificate;
pub mod circuit;
pub mod design;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod scalar;
pub mod simulation;

pub use certificate::{
    build_certificate, build_problem, random_feasible_cost_scan, verify_certificate, CertificateReport,
    CertifiedProblem, DualCertificate, ScanReport,
};
pub use circuit::{
    build_interferometer, calibrate_phase_convention, feedforward_params, gain_and_transmittance,
    scheme_equivalence_check, AmplifierCircuit, EquivalenceReport, FeedforwardCircuit, PhaseConvention,
    CALIBRATION_PROBE,
};
pub use design::{
    design_from_weights, estimation_fidelity, estimation_tradeoff, solve_last_noise, CostWeights,
    EstimationTradeoffPoint, NoiseProfile, WeightedDesign,
};
pub use error::{CloneError, Result};
pub use gaussian::{clone_marginal, CloneMarginal, GaussianChannel, GaussianState};
pub use scalar::{Scalar, Tolerances};
pub use simulation::{SimConfig, SimResult, Simulator};

pub type NoiseProfileF64 = NoiseProfile<f64>;
pub type CostWeightsF64 = CostWeights<f64>;
pub type GaussianStateF64 = GaussianState<f64>;
pub type GaussianChannelF64 = GaussianChannel<f64>;
pub type AmplifierCircuitF64 = AmplifierCircuit<f64>;
pub type FeedforwardCircuitF64 = FeedforwardCircuit<f64>;
pub type CertifiedProblemF64 = CertifiedProblem<f64>;
pub type DualCertificateF64 = DualCertificate<f64>;
pub type SimConfigF64 = SimConfig<f64>;
pub type SimResultF64 = SimResult<f64>;
pub type TolerancesF64 = Tolerances<f64>;
