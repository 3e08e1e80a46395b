//! Gaussian states and Gaussian completely positive maps.
//!
//! Quadratures are ordered `(x_1..x_m, p_1..p_m)` with `[x, p] = i`. The
//! covariance matrix is `γ_jk = <Δr_j Δr_k + Δr_k Δr_j>`, so the vacuum has
//! `γ = I` and one shot-noise unit corresponds to a variance of 1/2. A
//! coherent state `|α>` has mean `(√2 Re α, √2 Im α)`.

mod channel;
mod marginal;
mod modes;
mod state;
mod symplectic;

pub use channel::GaussianChannel;
pub use marginal::{clone_marginal, husimi_q, CloneMarginal};
pub use modes::LinearModeMap;
pub use state::{amplitude_to_quadratures, quadratures_to_amplitude, GaussianState};
pub use symplectic::{symplectic_form, SymplecticForm};
