use crate::error::{CloneError, Result};
use crate::scalar::Scalar;

/// One point of the partial-estimation tradeoff: a quantum copy with noise
/// `n_f` against a classical estimate with noise `n_g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationTradeoffPoint<T> {
    pub n_f: T,
    pub n_g: T,
    pub fidelity_copy: T,
    pub fidelity_estimate: T,
}

/// `n_G = (n_F + 1)² / (4 n_F)`, the limit of one clone against infinitely
/// many equally noisy ones. `n_F = 0` yields an infinitely noisy estimate
/// (`n_g = ∞`, estimate fidelity 0).
pub fn estimation_tradeoff<T: Scalar>(n_f: T) -> Result<EstimationTradeoffPoint<T>> {
    if !(n_f >= T::zero()) || !n_f.is_finite() {
        return Err(CloneError::InvalidParameter(format!(
            "copy noise must be a finite non-negative number, got {}",
            n_f.as_f64()
        )));
    }
    if n_f == T::zero() {
        return Ok(EstimationTradeoffPoint {
            n_f,
            n_g: T::lit(f64::INFINITY),
            fidelity_copy: T::one(),
            fidelity_estimate: T::zero(),
        });
    }
    let one = T::one();
    let n_g = (n_f + one) * (n_f + one) / (T::lit(4.0) * n_f);
    Ok(EstimationTradeoffPoint {
        n_f,
        n_g,
        fidelity_copy: one / (one + n_f),
        fidelity_estimate: one / (one + n_g),
    })
}

/// `G = 4F(1-F) / (4F(1-F) + 1)`.
pub fn estimation_fidelity<T: Scalar>(fidelity_copy: T) -> T {
    let q = T::lit(4.0) * fidelity_copy * (T::one() - fidelity_copy);
    q / (q + T::one())
}
