//! The noise tradeoff of optimal asymmetric Gaussian cloners.
//!
//! An `N -> M` cloner adding `n_j` thermal photons to clone `j` is optimal
//! exactly when `(Σ √n_k)² = (M - N)(Σ n_j + 1)`.

mod estimation;
mod profile;
mod weights;

pub use estimation::{estimation_fidelity, estimation_tradeoff, EstimationTradeoffPoint};
pub use profile::{last_noise_roots, solve_last_noise, LastNoiseRoots, NoiseProfile};
pub use weights::{design_from_weights, CostWeights, WeightedDesign};
