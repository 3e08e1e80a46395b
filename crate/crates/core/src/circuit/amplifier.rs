use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;

use crate::design::NoiseProfile;
use crate::error::{CloneError, Result};
use crate::gaussian::{GaussianChannel, LinearModeMap};
use crate::linalg::{complete_orthonormal, max_abs_diff, symmetric_eigen_descending};
use crate::scalar::{Scalar, Tolerances};

use super::reference::collection_channel;

/// Residual norm below which a Gram-Schmidt candidate is skipped.
const GRAM_SCHMIDT_SKIP: f64 = 1e-8;

/// Amplifier gain `g = √(1 + n_tot)` and beam-splitter transmittance
/// `t = √((M - N)/(n_tot N))`. For `M = N` no amplification happens and
/// `(1, 1)` is returned.
pub fn gain_and_transmittance<T: Scalar>(profile: &NoiseProfile<T>, tol: &Tolerances<T>) -> Result<(T, T)> {
    profile.require_optimal(tol)?;
    if profile.m_out() == profile.n_in() {
        return Ok((T::one(), T::one()));
    }
    let n_tot = profile.n_tot();
    if !(n_tot > T::zero()) {
        return Err(CloneError::Infeasible("zero total noise with M > N".into()));
    }
    let gain = (T::one() + n_tot).sqrt();
    let t = (profile.excess() / (n_tot * T::from_count(profile.n_in()))).sqrt();
    if t > T::one() + tol.algebraic.sqrt() {
        return Err(CloneError::OutOfRange { what: "transmittance t".into(), value: t.as_f64() });
    }
    Ok((gain, t.min(T::one())))
}

/// Amplifier-based cloner: the collected signal is split on a beam splitter
/// (`t`, `r`), the transmitted part is amplified with gain `g`, and both
/// parts plus `M - 2` vacua enter an `M`-port interferometer `V`.
///
/// Clone `j` reads `a_j = a/√N + Σ_k κ_jk b_k + √n_j c^†`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplifierCircuit<T: Scalar> {
    profile: NoiseProfile<T>,
    transmittance: T,
    gain: T,
    interferometer: DMatrix<T>,
    kappa: DMatrix<T>,
}

/// Invariant residuals of an amplifier circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifierChecks<T> {
    /// `max |V^T V - I|`.
    pub unitarity: T,
    /// `max |κκ^T - (I - H/N + F)|`.
    pub kappa_gram: T,
    /// `|g - √(1 + n_tot)|`.
    pub gain: T,
    /// `|t - √((M-N)/(n_tot N))|`, zero when `M = N`.
    pub transmittance: T,
    /// `max_j |coefficient of a in a_j - 1/√N|`.
    pub amplitude: T,
    /// `max_j |coefficient of c^† in a_j - √n_j|`.
    pub idler: T,
    pub t_in_range: bool,
}

impl<T: Scalar> AmplifierChecks<T> {
    pub fn max_residual(&self) -> T {
        self.unitarity
            .max(self.kappa_gram)
            .max(self.gain)
            .max(self.transmittance)
            .max(self.amplitude)
            .max(self.idler)
    }

    pub fn passed(&self, tol: &Tolerances<T>) -> bool {
        self.t_in_range && self.max_residual() <= tol.algebraic
    }
}

/// Synthesizes `V` and `κ` for an optimal profile.
///
/// Column `M` of `V` is `√(n_j/n_tot)`; column 1 follows from requiring the
/// coherent part of every clone to be `α`; the remaining columns complete
/// `V` by Gram-Schmidt over the canonical basis. At the symmetric point
/// `t = 1` the second splitter port carries no signal and column 1 is free.
pub fn build_interferometer<T: Scalar>(
    profile: &NoiseProfile<T>,
    tol: &Tolerances<T>,
) -> Result<AmplifierCircuit<T>> {
    let (gain, t) = gain_and_transmittance(profile, tol)?;
    let m = profile.m_out();
    let inv_sqrt_n = T::one() / T::from_count(profile.n_in()).sqrt();
    let r = (T::one() - t * t).max(T::zero()).sqrt();

    let last: DVector<T> = if profile.m_out() == profile.n_in() {
        DVector::from_element(m, T::one() / T::from_count(m).sqrt())
    } else {
        let n_tot = profile.n_tot();
        DVector::from_iterator(m, profile.noises().iter().map(|&n| (n / n_tot).sqrt()))
    };
    let mut fixed = vec![(m - 1, last.clone())];

    if m >= 2 && r > T::lit(1e-12) {
        let raw = last.map(|v| (inv_sqrt_n - v * gain * t) / r);
        let overlap = raw.dot(&last);
        let norm_err = (raw.norm() - T::one()).abs();
        if overlap.abs() + norm_err > T::lit(1e-6) {
            return Err(CloneError::UnitaryCompletion(format!(
                "signal column is not orthonormal to the idler column (overlap {:e}, norm error {:e})",
                overlap.as_f64(),
                norm_err.as_f64()
            )));
        }
        let mut col = &raw - &last * overlap;
        let norm = col.norm();
        if norm < T::lit(GRAM_SCHMIDT_SKIP) {
            return Err(CloneError::UnitaryCompletion("degenerate signal column".into()));
        }
        col /= norm;
        fixed.push((0, col));
    }

    let interferometer = complete_orthonormal(m, &fixed, T::lit(GRAM_SCHMIDT_SKIP))
        .ok_or_else(|| CloneError::UnitaryCompletion("canonical basis exhausted".into()))?;
    let kappa = canonical_kappa(profile);
    Ok(AmplifierCircuit { profile: profile.clone(), transmittance: t, gain, interferometer, kappa })
}

/// `κ = E diag(√e)` from the `M - 1` leading eigenpairs of `I - H/N + F`,
/// each column signed so its largest-magnitude entry is positive.
fn canonical_kappa<T: Scalar>(profile: &NoiseProfile<T>) -> DMatrix<T> {
    let m = profile.m_out();
    let (values, vectors) = symmetric_eigen_descending(&profile.coupling_gram());
    let mut kappa = DMatrix::zeros(m, m.saturating_sub(1));
    for k in 0..m.saturating_sub(1) {
        let scale = values[k].max(T::zero()).sqrt();
        let mut col = vectors.column(k).into_owned();
        let pivot = col.iter().copied().fold(T::zero(), |best, v| if v.abs() > best.abs() { v } else { best });
        if pivot < T::zero() {
            col = -col;
        }
        kappa.set_column(k, &(col * scale));
    }
    kappa
}

impl<T: Scalar> AmplifierCircuit<T> {
    /// Reassembles a circuit from stored parameters; call
    /// [`AmplifierCircuit::checks`] to validate it.
    pub fn from_parts(
        profile: NoiseProfile<T>,
        transmittance: T,
        gain: T,
        interferometer: DMatrix<T>,
        kappa: DMatrix<T>,
    ) -> Result<Self> {
        let m = profile.m_out();
        if interferometer.shape() != (m, m) {
            return Err(CloneError::DimensionMismatch(format!("interferometer must be {m}x{m}")));
        }
        if kappa.shape() != (m, m.saturating_sub(1)) {
            return Err(CloneError::DimensionMismatch(format!("kappa must be {m}x{}", m.saturating_sub(1))));
        }
        Ok(Self { profile, transmittance, gain, interferometer, kappa })
    }

    pub fn profile(&self) -> &NoiseProfile<T> {
        &self.profile
    }

    pub fn transmittance(&self) -> T {
        self.transmittance
    }

    pub fn reflectance(&self) -> T {
        (T::one() - self.transmittance * self.transmittance).max(T::zero()).sqrt()
    }

    pub fn gain(&self) -> T {
        self.gain
    }

    pub fn interferometer(&self) -> &DMatrix<T> {
        &self.interferometer
    }

    /// Canonical `κ` (unique up to the sign convention).
    pub fn kappa(&self) -> &DMatrix<T> {
        &self.kappa
    }

    /// Heisenberg map on inputs `[a, b_1, .., b_{M-1}, c]`:
    /// `a_out = g(t a - r b_1) + √(g²-1) c^†`, `b_1' = r a + t b_1`, then
    /// `a_j = Σ_{k<M} v_jk b_k' + v_jM a_out`.
    pub fn mode_map(&self) -> LinearModeMap<T> {
        let m = self.profile.m_out();
        let (t, r, g) = (self.transmittance, self.reflectance(), self.gain);
        let idler = (g * g - T::one()).max(T::zero()).sqrt();
        let v = &self.interferometer;
        let mut map = LinearModeMap::zeros(m, m + 1);
        let re = |x: T| Complex::new(x, T::zero());
        for j in 0..m {
            let v_amp = v[(j, m - 1)];
            let mut coeff_a = v_amp * g * t;
            if m >= 2 {
                coeff_a += v[(j, 0)] * r;
                map.annihilation[(j, 1)] = re(v[(j, 0)] * t - v_amp * g * r);
                for k in 2..m {
                    map.annihilation[(j, k)] = re(v[(j, k - 1)]);
                }
            }
            map.annihilation[(j, 0)] = re(coeff_a);
            map.creation[(j, m)] = re(v_amp * idler);
        }
        map
    }

    /// `κ` as realized by the composed circuit; equals the canonical one up
    /// to an orthogonal rotation of the auxiliary modes.
    pub fn composite_kappa(&self) -> DMatrix<T> {
        let m = self.profile.m_out();
        let map = self.mode_map();
        DMatrix::from_fn(m, m.saturating_sub(1), |j, k| map.annihilation[(j, k + 1)].re)
    }

    /// Channel acting on the collected input mode.
    pub fn channel(&self) -> Result<GaussianChannel<T>> {
        self.mode_map().channel(&[0])
    }

    /// Channel acting on the `N` input replicas.
    pub fn replica_channel(&self) -> Result<GaussianChannel<T>> {
        self.channel()?.after(&collection_channel(self.profile.n_in()))
    }

    pub fn checks(&self) -> AmplifierChecks<T> {
        let p = &self.profile;
        let m = p.m_out();
        let v = &self.interferometer;
        let unitarity = max_abs_diff(&(v.transpose() * v), &DMatrix::identity(m, m));
        let gram = p.coupling_gram();
        let kappa_gram = max_abs_diff(&(&self.kappa * self.kappa.transpose()), &gram)
            .max(max_abs_diff(&{
                let k = self.composite_kappa();
                &k * k.transpose()
            }, &gram));
        let gain = (self.gain - (T::one() + p.n_tot()).sqrt()).abs();
        let transmittance = if m == p.n_in() || !(p.n_tot() > T::zero()) {
            T::zero()
        } else {
            (self.transmittance - (p.excess() / (p.n_tot() * T::from_count(p.n_in()))).sqrt()).abs()
        };
        let map = self.mode_map();
        let inv_sqrt_n = T::one() / T::from_count(p.n_in()).sqrt();
        let mut amplitude = T::zero();
        let mut idler = T::zero();
        for j in 0..m {
            amplitude = amplitude.max((map.annihilation[(j, 0)] - Complex::new(inv_sqrt_n, T::zero())).modulus());
            idler = idler.max((map.creation[(j, m)].re - p.noises()[j].sqrt()).abs());
        }
        AmplifierChecks {
            unitarity,
            kappa_gram,
            gain,
            transmittance,
            amplitude,
            idler,
            t_in_range: self.transmittance >= T::zero() && self.transmittance <= T::one(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::reference::{first_moment_matrix, optimal_noise_matrix};
    use crate::gaussian::GaussianState;
    use crate::linalg::max_abs;

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    #[test]
    fn gain_and_transmittance_examples() {
        let (g, t) = gain_and_transmittance(&NoiseProfile::<f64>::symmetric(1, 2).unwrap(), &tol()).unwrap();
        assert!((g - 2f64.sqrt()).abs() < 1e-15 && (t - 1.0).abs() < 1e-15);
        let (g, t) = gain_and_transmittance(&NoiseProfile::<f64>::symmetric(1, 3).unwrap(), &tol()).unwrap();
        assert!((g - 3f64.sqrt()).abs() < 1e-15 && (t - 1.0).abs() < 1e-15);
        let p = NoiseProfile::new(1, 2, vec![0.25, 1.0]).unwrap();
        let (g, t) = gain_and_transmittance(&p, &tol()).unwrap();
        assert!((g - 1.5).abs() < 1e-15);
        assert!((t - 0.8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn off_surface_rejected() {
        let p = NoiseProfile::new(1, 2, vec![0.25, 0.25]).unwrap();
        assert!(matches!(gain_and_transmittance(&p, &tol()), Err(CloneError::OffSurface { .. })));
        assert!(build_interferometer(&p, &tol()).is_err());
    }

    #[test]
    fn symmetric_one_to_two_is_a_balanced_splitter() {
        let c = build_interferometer(&NoiseProfile::<f64>::symmetric(1, 2).unwrap(), &tol()).unwrap();
        let s = 0.5f64.sqrt();
        let v = c.interferometer();
        assert!((v[(0, 1)] - s).abs() < 1e-15 && (v[(1, 1)] - s).abs() < 1e-15);
        assert!((v[(0, 0)].abs() - s).abs() < 1e-15 && (v[(1, 0)].abs() - s).abs() < 1e-15);
        let checks = c.checks();
        assert!(checks.passed(&tol()), "{checks:?}");
    }

    #[test]
    fn asymmetric_one_to_two_means() {
        let p = NoiseProfile::new(1, 2, vec![0.25, 1.0]).unwrap();
        let c = build_interferometer(&p, &tol()).unwrap();
        let alpha = Complex::new(1.0, 0.5);
        let out = c.replica_channel().unwrap().apply(&GaussianState::coherent(&[alpha])).unwrap();
        for j in 0..2 {
            assert!((out.amplitude(j) - alpha).norm() < 1e-14);
        }
        assert!(c.checks().passed(&tol()));
    }

    #[test]
    fn channel_matches_reference_formulas() {
        let p = NoiseProfile::new(1, 3, vec![0.5, 0.5, 2.0]).unwrap();
        let c = build_interferometer(&p, &tol()).unwrap();
        let ch = c.channel().unwrap();
        assert!(max_abs_diff(ch.s(), &first_moment_matrix(1, 3)) < 1e-12);
        assert!(max_abs_diff(ch.g(), &optimal_noise_matrix(&p)) < 1e-12);
        assert!(ch.cp_min_eigenvalue() > -1e-10);
    }

    #[test]
    fn identity_cloner() {
        let p = NoiseProfile::<f64>::symmetric(1, 1).unwrap();
        let ch = build_interferometer(&p, &tol()).unwrap().channel().unwrap();
        assert!(max_abs_diff(ch.s(), &DMatrix::identity(2, 2)) < 1e-15);
        assert!(max_abs(ch.g()) < 1e-15);

        let p = NoiseProfile::<f64>::symmetric(3, 3).unwrap();
        let c = build_interferometer(&p, &tol()).unwrap();
        let out = c.replica_channel().unwrap().apply(&GaussianState::coherent_replicas(Complex::new(0.2, 0.1), 3)).unwrap();
        assert!(max_abs_diff(out.cov(), &DMatrix::identity(6, 6)) < 1e-14);
        assert!(c.checks().passed(&tol()));
    }

    #[test]
    fn kappa_sign_convention() {
        let p = NoiseProfile::new(1, 3, vec![0.5, 0.5, 2.0]).unwrap();
        let c = build_interferometer(&p, &tol()).unwrap();
        for col in c.kappa().column_iter() {
            let pivot = col.iter().copied().fold(0.0f64, |b, v| if v.abs() > b.abs() { v } else { b });
            assert!(pivot >= 0.0);
        }
    }
}
