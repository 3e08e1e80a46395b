mod common;

use gaussclone::simulation::ShotSample;
use gaussclone::{CloneError, NoiseProfile, SimConfig, Simulator, Tolerances};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use common::clone_cov;

fn config(noises: &[f64], n_in: usize, alpha: Complex<f64>, shots: u64, seed: u64, shards: usize) -> SimConfig<f64> {
    SimConfig {
        profile: NoiseProfile::new(n_in, noises.len(), noises.to_vec()).unwrap(),
        alpha,
        shots,
        seed,
        shards,
    }
}

fn expected_mean(alpha: Complex<f64>, m: usize) -> DVector<f64> {
    let s = 2f64.sqrt();
    DVector::from_fn(2 * m, |i, _| if i < m { s * alpha.re } else { s * alpha.im })
}

#[test]
fn symmetric_one_to_two_matches_the_clone_covariance() {
    let cfg = config(&[0.5, 0.5], 1, Complex::new(1.0, 0.0), 1_000_000, 42, 8);
    let res = Simulator::new(&cfg, &Tolerances::default()).unwrap().run();
    assert_eq!(res.shots_used, 1_000_000);
    let expect = clone_cov(&[0.5, 0.5]);
    assert_eq!(expect[(0, 0)], 2.0);
    assert_eq!(expect[(0, 1)], 1.0);
    assert!(res.cov_z_score(&expect) < 5.0);
    assert!(res.mean_z_score(&expected_mean(cfg.alpha, 2)) < 5.0);
    for c in &res.clone_means {
        assert!((c - cfg.alpha).norm() < 0.01);
    }
}

#[test]
fn asymmetric_profile_matches_the_clone_covariance() {
    let alpha = Complex::new(0.3, -0.7);
    let cfg = config(&[0.25, 1.0], 1, alpha, 1_000_000, 7, 4);
    let res = Simulator::new(&cfg, &Tolerances::default()).unwrap().run();
    let expect = clone_cov(&[0.25, 1.0]);
    // (x_1, x_2, p_1, p_2) diagonal
    assert_eq!([expect[(0, 0)], expect[(1, 1)], expect[(2, 2)], expect[(3, 3)]], [1.5, 3.0, 1.5, 3.0]);
    assert!(res.cov_z_score(&expect) < 5.0);
    assert!(res.mean_z_score(&expected_mean(alpha, 2)) < 5.0);
}

#[test]
fn identity_cloner_reproduces_vacuum_noise() {
    let cfg = config(&[0.0, 0.0, 0.0], 3, Complex::new(-0.4, 0.9), 200_000, 3, 3);
    let res = Simulator::new(&cfg, &Tolerances::default());
    // M = N has no tap to measure from
    match res {
        Ok(sim) => {
            let r = sim.run();
            assert!(r.cov_z_score(&DMatrix::identity(6, 6)) < 5.0);
        }
        Err(e) => assert!(matches!(e, CloneError::InvalidParameter(_) | CloneError::OutOfRange { .. }), "{e}"),
    }
}

#[test]
fn preconditions() {
    let tol = Tolerances::default();
    let mut cfg = config(&[0.5, 0.5], 1, Complex::new(1.0, 0.0), 0, 1, 1);
    assert!(Simulator::new(&cfg, &tol).is_err());
    cfg.shots = 100;
    cfg.profile = NoiseProfile::new(1, 2, vec![0.0, 0.0]).unwrap();
    assert!(matches!(Simulator::new(&cfg, &tol), Err(CloneError::OffSurface { .. })));
}

#[test]
fn estimator_error_shrinks_like_inverse_root_shots() {
    let expect = clone_cov(&[0.5, 0.5]);
    let counts = [10_000u64, 100_000, 1_000_000];
    let seeds = 8;
    let mut points = Vec::new();
    for &shots in &counts {
        let mean_err: f64 = (0..seeds)
            .map(|seed| {
                let cfg = config(&[0.5, 0.5], 1, Complex::new(1.0, 0.0), shots, 1000 + seed, 4);
                let res = Simulator::new(&cfg, &Tolerances::default()).unwrap().run();
                common::max_abs_diff(&res.clone_cov, &expect)
            })
            .sum::<f64>()
            / seeds as f64;
        points.push(((shots as f64).ln(), mean_err.ln()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / points.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((-0.6..=-0.4).contains(&slope), "slope {slope}");
}

#[test]
fn covariance_is_independent_of_the_input_amplitude() {
    let tol = Tolerances::default();
    let a = Simulator::new(&config(&[0.25, 1.0], 1, Complex::new(0.0, 0.0), 50_000, 9, 2), &tol).unwrap().run();
    let b = Simulator::new(&config(&[0.25, 1.0], 1, Complex::new(2.5, -1.5), 50_000, 9, 2), &tol).unwrap().run();
    assert!(common::max_abs_diff(&a.clone_cov, &b.clone_cov) < 1e-12);
}

#[test]
fn results_depend_only_on_seed_shots_and_shards() {
    let tol = Tolerances::default();
    let cfg = config(&[0.5, 0.5, 2.0], 1, Complex::new(0.2, 0.1), 30_000, 5, 6);
    let sim = Simulator::new(&cfg, &tol).unwrap();
    let parallel = sim.run();
    assert_eq!(parallel, sim.run());
    let mut rows = 0;
    let streamed = sim.run_with_sink(|s: &ShotSample<'_, f64>| {
        assert_eq!(s.quadratures.len(), 6);
        rows += 1;
    });
    assert_eq!(parallel, streamed);
    assert_eq!(rows, 30_000);

    let other = Simulator::new(&SimConfig { shards: 3, ..cfg.clone() }, &tol).unwrap().run();
    assert_ne!(other.clone_cov, parallel.clone_cov);
    // statistically identical: both agree with the reference within 5 SE
    let expect = clone_cov(&[0.5, 0.5, 2.0]);
    assert!(other.cov_z_score(&expect) < 5.0 && parallel.cov_z_score(&expect) < 5.0);

    let reseeded = Simulator::new(&SimConfig { seed: 6, ..cfg }, &tol).unwrap().run();
    assert_ne!(reseeded, parallel);
}
