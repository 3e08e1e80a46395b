use nalgebra::ComplexField;
use num_complex::Complex;

use crate::design::NoiseProfile;
use crate::error::{CloneError, Result};
use crate::gaussian::{GaussianChannel, LinearModeMap};
use crate::scalar::{Scalar, Tolerances};

use super::reference::collection_channel;
use super::CALIBRATION_PROBE;

/// Whether clone `j` is displaced by `g_j o` or by `g_j o*`, where `o` is
/// the complex heterodyne outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PhaseConvention {
    #[default]
    Direct,
    Conjugate,
}

impl PhaseConvention {
    pub const ALL: [PhaseConvention; 2] = [PhaseConvention::Direct, PhaseConvention::Conjugate];

    pub fn as_str(self) -> &'static str {
        match self {
            PhaseConvention::Direct => "direct",
            PhaseConvention::Conjugate => "conjugate",
        }
    }

    pub fn apply<T: Scalar>(self, outcome: Complex<T>) -> Complex<T> {
        match self {
            PhaseConvention::Direct => outcome,
            PhaseConvention::Conjugate => outcome.conj(),
        }
    }
}

impl std::str::FromStr for PhaseConvention {
    type Err = CloneError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Self::Direct),
            "conjugate" => Ok(Self::Conjugate),
            other => Err(CloneError::InvalidParameter(format!("unknown phase convention '{other}'"))),
        }
    }
}

/// Measurement-and-feedforward cloner.
///
/// The collected beam hits a tap `BS_g` (reflectance `r̃`); the reflected
/// part is heterodyned, measuring `o = r̃ a + t̃ b + c^†`. The transmitted
/// part is split into `M` modes by a chain of `M - 1` splitters with
/// reflectances `r_k`, and mode `j` is displaced by `g_j o`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedforwardCircuit<T: Scalar> {
    profile: NoiseProfile<T>,
    tap_reflectance: T,
    gains: Vec<T>,
    reflectances: Vec<T>,
    /// `t_k = √(1 - r_k²)`, kept alongside `r_k` for accuracy near `r_k = 1`.
    transmissions: Vec<T>,
    phase_convention: PhaseConvention,
}

/// Invariant residuals of a feedforward circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedforwardChecks<T> {
    /// `|r̃ - √((M-N)/((1+n_tot)N))|`.
    pub tap: T,
    /// `max_j |g_j - √n_j|`.
    pub gains: T,
    /// Largest deviation of the splitter reflectances from the recursion.
    pub reflectances: T,
    /// Largest clone-mean error for the calibration probe amplitude.
    pub mean: T,
    pub in_range: bool,
}

impl<T: Scalar> FeedforwardChecks<T> {
    pub fn max_residual(&self) -> T {
        self.tap.max(self.gains).max(self.reflectances).max(self.mean)
    }

    pub fn passed(&self, tol: &Tolerances<T>) -> bool {
        self.in_range && self.max_residual() <= tol.algebraic
    }
}

fn tap_reflectance<T: Scalar>(profile: &NoiseProfile<T>) -> T {
    (profile.excess() / ((T::one() + profile.n_tot()) * T::from_count(profile.n_in()))).sqrt()
}

/// Splitter reflectances and transmissions.
///
/// The recursion `r_j = s_j / Π_{k<j} t_k` with amplitude shares
/// `s_j = (√(1+n_tot) - √((M-N) n_j)) / √((2+n_tot)N - M)` is evaluated
/// through `Π_{k<j} t_k = √(Σ_{k>=j} s_k²)`, which holds because the shares
/// have unit norm on the optimal surface. This keeps `t_j` accurate when
/// `r_j` is close to one.
fn splitter_chain<T: Scalar>(profile: &NoiseProfile<T>, tol: &Tolerances<T>) -> Result<(Vec<T>, Vec<T>)> {
    let n = T::from_count(profile.n_in());
    let m = T::from_count(profile.m_out());
    let denom = (T::lit(2.0) + profile.n_tot()) * n - m;
    if !(denom > T::zero()) {
        return Err(CloneError::Infeasible(format!(
            "(2 + n_tot) N - M = {} is not positive",
            denom.as_f64()
        )));
    }
    let denom = denom.sqrt();
    let head = (T::one() + profile.n_tot()).sqrt();
    let slack = tol.algebraic.sqrt();
    let shares: Vec<T> = profile.noises().iter().map(|&nj| (head - (profile.excess() * nj).sqrt()) / denom).collect();
    if let Some((j, s)) = shares.iter().enumerate().find(|(_, s)| **s < -slack) {
        return Err(CloneError::OutOfRange { what: format!("amplitude share of clone {}", j + 1), value: s.as_f64() });
    }
    let shares: Vec<T> = shares.into_iter().map(|s| s.max(T::zero())).collect();
    let mut tails = vec![T::zero(); shares.len() + 1];
    for j in (0..shares.len()).rev() {
        tails[j] = tails[j + 1] + shares[j] * shares[j];
    }
    let mut reflectances = Vec::with_capacity(shares.len().saturating_sub(1));
    let mut transmissions = Vec::with_capacity(shares.len().saturating_sub(1));
    for j in 0..shares.len().saturating_sub(1) {
        let remaining = tails[j].sqrt();
        let (r, t) = if remaining > T::zero() {
            (shares[j] / remaining, tails[j + 1].sqrt() / remaining)
        } else {
            // nothing left to split; any splitter works
            (T::zero(), T::one())
        };
        if r > T::one() + slack {
            return Err(CloneError::OutOfRange { what: format!("reflectance r_{}", j + 1), value: r.as_f64() });
        }
        reflectances.push(r.min(T::one()));
        transmissions.push(t.min(T::one()));
    }
    Ok((reflectances, transmissions))
}

/// Tap reflectance, electronic gains `g_j = √n_j`, splitter reflectances,
/// and the calibrated phase convention for an optimal profile.
pub fn feedforward_params<T: Scalar>(
    profile: &NoiseProfile<T>,
    tol: &Tolerances<T>,
) -> Result<FeedforwardCircuit<T>> {
    profile.require_optimal(tol)?;
    let (reflectances, transmissions) = splitter_chain(profile, tol)?;
    let mut circuit = FeedforwardCircuit {
        profile: profile.clone(),
        tap_reflectance: tap_reflectance(profile),
        gains: profile.noises().iter().map(|n| n.sqrt()).collect(),
        reflectances,
        transmissions,
        phase_convention: PhaseConvention::Direct,
    };
    let probe = Complex::new(T::lit(CALIBRATION_PROBE.0), T::lit(CALIBRATION_PROBE.1));
    circuit.phase_convention = calibrate_phase_convention(&circuit, probe, tol)?;
    Ok(circuit)
}

/// Picks the phase convention under which every clone mean equals `probe`,
/// by analytic mean propagation. [`PhaseConvention::Direct`] wins ties
/// (e.g. `probe = 0`).
pub fn calibrate_phase_convention<T: Scalar>(
    circuit: &FeedforwardCircuit<T>,
    probe: Complex<T>,
    tol: &Tolerances<T>,
) -> Result<PhaseConvention> {
    let scale = T::one().max(probe.modulus());
    PhaseConvention::ALL
        .into_iter()
        .find(|&conv| {
            circuit
                .clone_means_with(conv, probe)
                .iter()
                .all(|mean| (*mean - probe).modulus() <= tol.algebraic * scale)
        })
        .ok_or(CloneError::NoPhaseConvention)
}

impl<T: Scalar> FeedforwardCircuit<T> {
    pub fn from_parts(
        profile: NoiseProfile<T>,
        tap_reflectance: T,
        gains: Vec<T>,
        reflectances: Vec<T>,
        phase_convention: PhaseConvention,
    ) -> Result<Self> {
        let m = profile.m_out();
        if gains.len() != m || reflectances.len() != m.saturating_sub(1) {
            return Err(CloneError::DimensionMismatch(format!(
                "feedforward circuit for {m} clones needs {m} gains and {} reflectances",
                m.saturating_sub(1)
            )));
        }
        let transmissions = reflectances.iter().map(|&r| ((T::one() - r) * (T::one() + r)).max(T::zero()).sqrt()).collect();
        Ok(Self { profile, tap_reflectance, gains, reflectances, transmissions, phase_convention })
    }

    pub fn profile(&self) -> &NoiseProfile<T> {
        &self.profile
    }

    pub fn tap_reflectance(&self) -> T {
        self.tap_reflectance
    }

    pub fn tap_transmittance(&self) -> T {
        (T::one() - self.tap_reflectance * self.tap_reflectance).max(T::zero()).sqrt()
    }

    pub fn gains(&self) -> &[T] {
        &self.gains
    }

    pub fn reflectances(&self) -> &[T] {
        &self.reflectances
    }

    pub fn phase_convention(&self) -> PhaseConvention {
        self.phase_convention
    }

    /// Amplitude fraction `s_j` of the transmitted beam reaching clone `j`:
    /// `s_j = r_j Π_{k<j} t_k`, `s_M = Π_k t_k`.
    pub fn split_amplitudes(&self) -> Vec<T> {
        let mut remaining = T::one();
        let mut out = Vec::with_capacity(self.gains.len());
        for (&r, &t) in self.reflectances.iter().zip(&self.transmissions) {
            out.push(remaining * r);
            remaining *= t;
        }
        out.push(remaining);
        out
    }

    /// Analytic clone means for the coherent input `|α>^{⊗N}`.
    pub fn clone_means(&self, alpha: Complex<T>) -> Vec<Complex<T>> {
        self.clone_means_with(self.phase_convention, alpha)
    }

    fn clone_means_with(&self, convention: PhaseConvention, alpha: Complex<T>) -> Vec<Complex<T>> {
        let collected = alpha * T::from_count(self.profile.n_in()).sqrt();
        let outcome = convention.apply(collected * self.tap_reflectance);
        let transmitted = collected * self.tap_transmittance();
        self.split_amplitudes()
            .iter()
            .zip(&self.gains)
            .map(|(&s, &g)| transmitted * s + outcome * g)
            .collect()
    }

    /// Heisenberg map on inputs `[a, b, c, d_1, .., d_{M-1}]`, where `b` is
    /// the vacuum port of the tap, `c` the heterodyne vacuum and `d_k` the
    /// vacuum ports of the splitter chain.
    pub fn mode_map(&self) -> LinearModeMap<T> {
        let m = self.profile.m_out();
        let (rt, tt) = (self.tap_reflectance, self.tap_transmittance());
        let re = |x: T| Complex::new(x, T::zero());
        let mut map = LinearModeMap::zeros(m, 3 + m.saturating_sub(1));

        // transmitted beam t̃ a - r̃ b routed through the splitter chain
        let mut carry = vec![T::zero(); map.inputs()];
        carry[0] = tt;
        carry[1] = -rt;
        for (k, (&r, &t)) in self.reflectances.iter().zip(&self.transmissions).enumerate() {
            let vac = 3 + k;
            for i in 0..carry.len() {
                map.annihilation[(k, i)] = re(r * carry[i]);
            }
            map.annihilation[(k, vac)] += re(t);
            for c in carry.iter_mut() {
                *c *= t;
            }
            carry[vac] -= r;
        }
        for i in 0..carry.len() {
            map.annihilation[(m - 1, i)] = re(carry[i]);
        }

        for (j, &g) in self.gains.iter().enumerate() {
            match self.phase_convention {
                PhaseConvention::Direct => {
                    map.annihilation[(j, 0)] += re(g * rt);
                    map.annihilation[(j, 1)] += re(g * tt);
                    map.creation[(j, 2)] += re(g);
                }
                PhaseConvention::Conjugate => {
                    map.creation[(j, 0)] += re(g * rt);
                    map.creation[(j, 1)] += re(g * tt);
                    map.annihilation[(j, 2)] += re(g);
                }
            }
        }
        map
    }

    /// Channel on the collected input mode, including the classical
    /// correlations induced by the shared outcome.
    pub fn channel(&self) -> Result<GaussianChannel<T>> {
        self.mode_map().channel(&[0])
    }

    pub fn replica_channel(&self) -> Result<GaussianChannel<T>> {
        self.channel()?.after(&collection_channel(self.profile.n_in()))
    }

    pub fn checks(&self, tol: &Tolerances<T>) -> FeedforwardChecks<T> {
        let p = &self.profile;
        let tap = (self.tap_reflectance - tap_reflectance(p)).abs();
        let gains = self
            .gains
            .iter()
            .zip(p.noises())
            .fold(T::zero(), |acc, (&g, &n)| acc.max((g - n.sqrt()).abs()));
        let (reflectances, recursion_ok) = match splitter_chain(p, tol) {
            Ok((expected, _)) => (
                expected
                    .iter()
                    .zip(&self.reflectances)
                    .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs())),
                true,
            ),
            Err(_) => (T::lit(f64::INFINITY), false),
        };
        let probe = Complex::new(T::lit(CALIBRATION_PROBE.0), T::lit(CALIBRATION_PROBE.1));
        let mean = self.clone_means(probe).iter().fold(T::zero(), |acc, m| acc.max((*m - probe).modulus()));
        let unit = |v: &T| *v >= T::zero() && *v <= T::one();
        FeedforwardChecks {
            tap,
            gains,
            reflectances,
            mean,
            in_range: recursion_ok && unit(&self.tap_reflectance) && self.reflectances.iter().all(unit),
        }
    }
}
