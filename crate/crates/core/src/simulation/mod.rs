//! Shot-level Monte Carlo of the measurement-and-feedforward cloner.
//!
//! Per shot the heterodyne outcome `o` is drawn from the Q-function of the
//! tapped coherent state (complex Gaussian, mean `r̃ √N α`, variance 1/2 per
//! real component). The transmitted beam stays a product of coherent states
//! after the splitter chain, so clone `j` is sampled as a coherent state of
//! amplitude `s_j t̃ √N α` (vacuum variance 1/2 per quadrature) displaced by
//! `g_j o`. All clones share the same `o`, which produces the clone-clone
//! correlations `2√(n_j n_k)`.
//!
//! Shots are split into shards; shard `k` draws from the ChaCha20 stream
//! `k` of the generator seeded with `seed`, so results depend only on
//! `(seed, shots, shards)`.

mod stats;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::circuit::{feedforward_params, FeedforwardCircuit};
use crate::design::NoiseProfile;
use crate::error::{CloneError, Result};
use crate::gaussian::quadratures_to_amplitude;
use crate::scalar::{Scalar, Tolerances};

pub use crate::circuit::{calibrate_phase_convention, PhaseConvention};
pub use stats::MomentAccumulator;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig<T: Scalar> {
    pub profile: NoiseProfile<T>,
    pub alpha: Complex<T>,
    pub shots: u64,
    pub seed: u64,
    pub shards: usize,
}

/// One simulated shot, handed to a sink by [`Simulator::run_with_sink`].
#[derive(Debug, Clone, Copy)]
pub struct ShotSample<'a, T> {
    pub shot: u64,
    /// Clone quadratures ordered `(x_1..x_M, p_1..p_M)`.
    pub quadratures: &'a [T],
    pub outcome: Complex<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult<T: Scalar> {
    pub clone_means: Vec<Complex<T>>,
    /// Sample mean of the quadratures.
    pub quadrature_means: DVector<T>,
    /// Unbiased sample covariance in the `γ` convention (twice the raw
    /// second central moments).
    pub clone_cov: DMatrix<T>,
    /// Standard errors of `quadrature_means`.
    pub mean_standard_errors: DVector<T>,
    /// Standard errors of `clone_cov` entries (Gaussian fourth moments).
    pub cov_standard_errors: DMatrix<T>,
    pub shots_used: u64,
}

impl<T: Scalar> SimResult<T> {
    /// Largest `|estimate - expected| / SE` over the covariance entries.
    pub fn cov_z_score(&self, expected: &DMatrix<T>) -> T {
        z_score(self.clone_cov.iter(), expected.iter(), self.cov_standard_errors.iter())
    }

    /// Largest `|estimate - expected| / SE` over the quadrature means.
    pub fn mean_z_score(&self, expected: &DVector<T>) -> T {
        z_score(self.quadrature_means.iter(), expected.iter(), self.mean_standard_errors.iter())
    }
}

fn z_score<'a, T: Scalar>(
    est: impl Iterator<Item = &'a T>,
    exp: impl Iterator<Item = &'a T>,
    se: impl Iterator<Item = &'a T>,
) -> T {
    est.zip(exp).zip(se).fold(T::zero(), |acc, ((&e, &x), &s)| acc.max((e - x).abs() / s))
}

/// A feedforward circuit bound to an input amplitude and a sampling plan.
#[derive(Debug, Clone)]
pub struct Simulator<T: Scalar> {
    circuit: FeedforwardCircuit<T>,
    alpha: Complex<T>,
    shots: u64,
    seed: u64,
    shards: usize,
}

impl<T: Scalar> Simulator<T>
where
    StandardNormal: Distribution<T>,
{
    pub fn new(config: &SimConfig<T>, tol: &Tolerances<T>) -> Result<Self> {
        let circuit = feedforward_params(&config.profile, tol)?;
        Self::from_circuit(circuit, config.alpha, config.shots, config.seed, config.shards)
    }

    pub fn from_circuit(
        circuit: FeedforwardCircuit<T>,
        alpha: Complex<T>,
        shots: u64,
        seed: u64,
        shards: usize,
    ) -> Result<Self> {
        if shots < 2 {
            return Err(CloneError::InvalidParameter(format!(
                "need at least 2 shots for a sample covariance, got {shots}"
            )));
        }
        if shards == 0 {
            return Err(CloneError::InvalidParameter("shard count must be positive".into()));
        }
        Ok(Self { circuit, alpha, shots, seed, shards })
    }

    pub fn circuit(&self) -> &FeedforwardCircuit<T> {
        &self.circuit
    }

    fn shard_range(&self, shard: usize) -> (u64, u64) {
        let k = self.shards as u64;
        let base = self.shots / k;
        let extra = self.shots % k;
        let i = shard as u64;
        let start = i * base + i.min(extra);
        let len = base + u64::from(i < extra);
        (start, len)
    }

    fn run_shard(&self, shard: usize, sink: &mut dyn FnMut(&ShotSample<'_, T>)) -> MomentAccumulator<T> {
        let m = self.circuit.profile().m_out();
        let (start, len) = self.shard_range(shard);
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(shard as u64);

        let collected = self.alpha * T::from_count(self.circuit.profile().n_in()).sqrt();
        let outcome_mean = collected * self.circuit.tap_reflectance();
        let transmitted = collected * self.circuit.tap_transmittance();
        let coherent: Vec<Complex<T>> = self.circuit.split_amplitudes().iter().map(|&s| transmitted * s).collect();
        let gains = self.circuit.gains();
        let convention = self.circuit.phase_convention();
        let half = T::inv_sqrt2();
        let root2 = T::sqrt2();

        let mut acc = MomentAccumulator::new(2 * m);
        let mut quad = vec![T::zero(); 2 * m];
        for shot in start..start + len {
            let o_re: T = StandardNormal.sample(&mut rng);
            let o_im: T = StandardNormal.sample(&mut rng);
            let outcome = outcome_mean + Complex::new(o_re * half, o_im * half);
            let displacement = convention.apply(outcome);
            for j in 0..m {
                let beta = coherent[j] + displacement * gains[j];
                let nx: T = StandardNormal.sample(&mut rng);
                let np: T = StandardNormal.sample(&mut rng);
                quad[j] = root2 * beta.re + half * nx;
                quad[m + j] = root2 * beta.im + half * np;
            }
            acc.push(&quad);
            sink(&ShotSample { shot, quadratures: &quad, outcome });
        }
        acc
    }

    /// Runs all shards in parallel and merges them in shard order.
    pub fn run(&self) -> SimResult<T> {
        let parts: Vec<MomentAccumulator<T>> =
            (0..self.shards).into_par_iter().map(|k| self.run_shard(k, &mut |_| {})).collect();
        self.finish(parts)
    }

    /// Runs shards sequentially, passing every shot to `sink`. The result is
    /// bit-identical to [`Simulator::run`].
    pub fn run_with_sink(&self, mut sink: impl FnMut(&ShotSample<'_, T>)) -> SimResult<T> {
        let parts: Vec<MomentAccumulator<T>> = (0..self.shards).map(|k| self.run_shard(k, &mut sink)).collect();
        self.finish(parts)
    }

    fn finish(&self, parts: Vec<MomentAccumulator<T>>) -> SimResult<T> {
        let m = self.circuit.profile().m_out();
        let total = parts.into_iter().fold(MomentAccumulator::new(2 * m), |mut acc, part| {
            acc.merge(&part);
            acc
        });
        let n = T::lit(total.count() as f64);
        let raw = total.covariance();
        let two = T::lit(2.0);
        let clone_cov = &raw * two;
        let mean_standard_errors = DVector::from_fn(2 * m, |i, _| (raw[(i, i)] / n).sqrt());
        let cov_standard_errors = DMatrix::from_fn(2 * m, 2 * m, |i, j| {
            two * ((raw[(i, i)] * raw[(j, j)] + raw[(i, j)] * raw[(i, j)]) / (n - T::one())).sqrt()
        });
        let mean = total.mean().clone();
        let clone_means = (0..m).map(|j| quadratures_to_amplitude(mean[j], mean[m + j])).collect();
        SimResult {
            clone_means,
            quadrature_means: mean,
            clone_cov,
            mean_standard_errors,
            cov_standard_errors,
            shots_used: total.count(),
        }
    }
}

/// Convenience wrapper: build the feedforward circuit for `config.profile`
/// and run it.
pub fn run<T: Scalar>(config: &SimConfig<T>, tol: &Tolerances<T>) -> Result<SimResult<T>>
where
    StandardNormal: Distribution<T>,
{
    Ok(Simulator::new(config, tol)?.run())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(shots: u64, shards: usize) -> SimConfig<f64> {
        SimConfig {
            profile: NoiseProfile::symmetric(1, 2).unwrap(),
            alpha: Complex::new(1.0, 0.0),
            shots,
            seed: 42,
            shards,
        }
    }

    #[test]
    fn shard_ranges_cover_all_shots() {
        let sim = Simulator::new(&config(103, 7), &Tolerances::default()).unwrap();
        let mut next = 0;
        for k in 0..7 {
            let (start, len) = sim.shard_range(k);
            assert_eq!(start, next);
            next += len;
        }
        assert_eq!(next, 103);
    }

    #[test]
    fn sink_and_parallel_agree_bitwise() {
        let sim = Simulator::new(&config(5_000, 4), &Tolerances::default()).unwrap();
        let mut seen = 0u64;
        let a = sim.run_with_sink(|s| {
            assert_eq!(s.shot, seen);
            seen += 1;
        });
        let b = sim.run();
        assert_eq!(a, b);
        assert_eq!(seen, 5_000);
    }

    #[test]
    fn too_few_shots_rejected() {
        assert!(Simulator::new(&config(1, 1), &Tolerances::default()).is_err());
        assert!(Simulator::new(&config(0, 1), &Tolerances::default()).is_err());
        assert!(Simulator::new(&config(10, 0), &Tolerances::default()).is_err());
    }

    #[test]
    fn off_surface_profile_rejected() {
        let mut cfg = config(100, 1);
        cfg.profile = NoiseProfile::new(1, 2, vec![0.1, 0.1]).unwrap();
        assert!(matches!(run(&cfg, &Tolerances::default()), Err(CloneError::OffSurface { .. })));
    }

    #[test]
    fn identity_cloner_has_vacuum_noise() {
        let cfg = SimConfig {
            profile: NoiseProfile::symmetric(2, 2).unwrap(),
            alpha: Complex::new(0.5, 0.5),
            shots: 20_000,
            seed: 1,
            shards: 2,
        };
        let res = run(&cfg, &Tolerances::default()).unwrap();
        assert!(res.cov_z_score(&DMatrix::identity(4, 4)) < 5.0);
    }
}
