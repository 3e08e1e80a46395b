mod common;

use gaussclone::circuit::optimal_channel;
use gaussclone::{
    build_interferometer, calibrate_phase_convention, feedforward_params, gain_and_transmittance,
    scheme_equivalence_check, CloneError, NoiseProfile, PhaseConvention, Tolerances,
};
use nalgebra::DMatrix;
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn tol() -> Tolerances<f64> {
    Tolerances::default()
}

fn profile(n: usize, noises: &[f64]) -> NoiseProfile<f64> {
    NoiseProfile::new(n, noises.len(), noises.to_vec()).unwrap()
}

#[test]
fn gain_and_transmittance_by_substitution() {
    let cases = [
        (profile(1, &[0.5, 0.5]), 2f64.sqrt(), 1.0),
        (profile(1, &[2.0 / 3.0; 3]), 3f64.sqrt(), 1.0),
        (profile(1, &[0.25, 1.0]), 1.5, 0.8f64.sqrt()),
    ];
    for (p, g, t) in cases {
        let (gg, tt) = gain_and_transmittance(&p, &tol()).unwrap();
        assert!((gg - g).abs() < 1e-14 && (tt - t).abs() < 1e-14, "{p:?}: {gg} {tt}");
    }
}

#[test]
fn symmetric_amplifier_uses_a_balanced_splitter() {
    let c = build_interferometer(&profile(1, &[0.5, 0.5]), &tol()).unwrap();
    let v = c.interferometer();
    let h = 0.5f64.sqrt();
    assert!((v[(0, 1)] - h).abs() < 1e-15 && (v[(1, 1)] - h).abs() < 1e-15);
    assert!((v[(0, 0)].abs() - h).abs() < 1e-15);
    let g = c.channel().unwrap();
    for i in 0..4 {
        assert!((g.g()[(i, i)] - 1.0).abs() < 1e-14);
    }
}

#[test]
fn asymmetric_means_are_exact() {
    let p = profile(1, &[0.25, 1.0]);
    let ch = build_interferometer(&p, &tol()).unwrap().replica_channel().unwrap();
    let alpha = Complex::new(1.0, 0.5);
    let out = ch.apply(&gaussclone::GaussianState::coherent_replicas(alpha, 1)).unwrap();
    for j in 0..2 {
        assert!((out.amplitude(j) - alpha).norm() < 1e-14);
    }
}

#[test]
fn identity_cloners() {
    let one = build_interferometer(&profile(1, &[0.0]), &tol()).unwrap().channel().unwrap();
    assert!(max_abs_diff(one.s(), &DMatrix::identity(2, 2)) < 1e-15);
    assert!(one.g().iter().all(|v| v.abs() < 1e-15));

    // for N = M > 1 the collected mode is split back into M modes, which
    // leaves vacuum noise I - H/N in the collected-mode description
    let three = build_interferometer(&profile(3, &[0.0; 3]), &tol()).unwrap();
    let ch = three.channel().unwrap();
    assert!(max_abs_diff(ch.g(), &g_opt(&[0.0; 3], 3)) < 1e-14);
    let alpha = Complex::new(0.7, -1.1);
    let out = three.replica_channel().unwrap().apply(&gaussclone::GaussianState::coherent_replicas(alpha, 3)).unwrap();
    assert!(max_abs_diff(out.cov(), &DMatrix::identity(6, 6)) < 1e-14);
    for j in 0..3 {
        assert!((out.amplitude(j) - alpha).norm() < 1e-14);
    }
}

#[test]
fn symmetric_feedforward_parameters() {
    let c = feedforward_params(&profile(1, &[0.5, 0.5]), &tol()).unwrap();
    let h = 0.5f64.sqrt();
    assert!((c.tap_reflectance() - h).abs() < 1e-15);
    assert!(c.gains().iter().all(|g| (g - h).abs() < 1e-15));
    assert!((c.reflectances()[0] - h).abs() < 1e-15);
    assert_eq!(c.phase_convention(), PhaseConvention::Direct);
}

#[test]
fn perfect_clone_gets_no_feedforward() {
    let p = profile(2, &[0.0, 0.5, 0.5]);
    assert!(p.is_optimal(&tol()));
    let c = feedforward_params(&p, &tol()).unwrap();
    assert_eq!(c.gains()[0], 0.0);
    assert!(scheme_equivalence_check(&p, Complex::new(0.3, -0.2), &tol()).unwrap().passed());
}

#[test]
fn boundary_profile_routes_nothing_to_the_last_clone() {
    // (0.5, 0.5, 2) is the double root: the third clone is pure feedforward
    let p = profile(1, &[0.5, 0.5, 2.0]);
    let c = feedforward_params(&p, &tol()).unwrap();
    assert_eq!(c.split_amplitudes()[2], 0.0);
    let report = scheme_equivalence_check(&p, Complex::new(-1.2, 0.4), &tol()).unwrap();
    assert!(report.passed(), "{report:?}");
}

#[test]
fn dominated_branch_cannot_be_built_by_feedforward() {
    let roots = gaussclone::design::last_noise_roots(&[1.0, 1.0], 1, 3).unwrap();
    let dominated = profile(1, &[1.0, 1.0, roots.other.unwrap()]);
    assert!(dominated.is_optimal(&tol()));
    assert!(matches!(feedforward_params(&dominated, &tol()), Err(CloneError::OutOfRange { .. })));
    let optimal = profile(1, &[1.0, 1.0, roots.optimal]);
    assert!(feedforward_params(&optimal, &tol()).is_ok());
}

#[test]
fn random_five_from_two_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 20 {
        let (p, _) = random_optimal_profile(&mut rng, 5);
        if (p.n_in(), p.m_out()) != (2, 5) {
            continue;
        }
        let alpha = random_alpha(&mut rng);
        let report = scheme_equivalence_check(&p, alpha, &tol()).unwrap();
        assert!(report.max_discrepancy() < 1e-9, "{report:?}");
        let ch = optimal_channel(&p);
        assert!(max_abs_diff(ch.g(), &g_opt(p.noises(), 2)) < 1e-14);
        checked += 1;
    }
}

#[test]
fn off_surface_profiles_are_rejected() {
    let p = profile(1, &[0.25, 0.25]);
    assert!(matches!(build_interferometer(&p, &tol()), Err(CloneError::OffSurface { .. })));
    assert!(matches!(feedforward_params(&p, &tol()), Err(CloneError::OffSurface { .. })));
    assert!(scheme_equivalence_check(&p, Complex::new(1.0, 0.0), &tol()).is_err());
}

#[test]
fn phase_calibration_ties_go_to_the_default() {
    let c = feedforward_params(&profile(1, &[0.5, 0.5]), &tol()).unwrap();
    let conv = calibrate_phase_convention(&c, Complex::new(0.0, 0.0), &tol()).unwrap();
    assert_eq!(conv, PhaseConvention::Direct);
    // a real probe cannot tell the conventions apart either
    let conv = calibrate_phase_convention(&c, Complex::new(1.0, 0.0), &tol()).unwrap();
    assert_eq!(conv, PhaseConvention::Direct);
}
