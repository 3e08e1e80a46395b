//! One function per subcommand. Each returns `Ok` on success; reports that
//! ran but did not pass come back as [`CliError::Failed`] after the report
//! has been printed and written.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use gaussclone::circuit::{optimal_channel, optimal_clone_covariance};
use gaussclone::design::last_noise_roots;
use gaussclone::linalg::max_abs_diff;
use gaussclone::simulation::ShotSample;
use gaussclone::{
    build_certificate, build_interferometer, build_problem, design_from_weights, estimation_tradeoff,
    feedforward_params, random_feasible_cost_scan, scheme_equivalence_check, verify_certificate, CostWeights,
    FeedforwardCircuit, GaussianChannel, GaussianState, NoiseProfile, Simulator, Tolerances, CALIBRATION_PROBE,
};
use nalgebra::DVector;
use num_complex::Complex;
use serde_json::json;

use crate::documents::{write_json, write_text, CircuitDocument, DesignDocument, LoadedCircuit};
use crate::error::CliError;
use crate::format::{float, to_json};

fn fmt_list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.10}")).collect();
    format!("[{}]", parts.join(", "))
}

fn emit_report(report: &serde_json::Value, out: Option<&Path>) -> Result<(), CliError> {
    let text = to_json(report).map_err(|e| CliError::Io(e.to_string()))?;
    print!("{text}");
    if let Some(path) = out {
        write_text(path, &text)?;
    }
    Ok(())
}

pub struct DesignArgs {
    pub weights: Option<Vec<f64>>,
    pub symmetric: bool,
    pub n_in: usize,
    pub m_out: usize,
    pub out: Option<PathBuf>,
}

pub fn design(args: DesignArgs) -> Result<(), CliError> {
    let (profile, weights) = match (&args.weights, args.symmetric) {
        (Some(_), true) => return Err(CliError::Input("--weights and --symmetric are mutually exclusive".into())),
        (None, false) => return Err(CliError::Input("one of --weights or --symmetric is required".into())),
        (None, true) => (NoiseProfile::symmetric(args.n_in, args.m_out)?, None),
        (Some(w), false) => {
            if w.len() != args.m_out {
                return Err(CliError::Input(format!("--weights needs M = {} values, got {}", args.m_out, w.len())));
            }
            let design = design_from_weights(&CostWeights::new(w.clone())?, args.n_in, args.m_out)?;
            (design.profile, Some(design.weights))
        }
    };
    let doc = DesignDocument::from_profile(&profile, weights.as_ref());
    println!("noises     = {}", fmt_list(&doc.noises));
    println!("fidelities = {}", fmt_list(&doc.fidelities));
    println!("residual   = {:e}", doc.residual);
    match doc.lambda {
        Some(l) => println!("lambda     = {l:.10}"),
        None => println!("lambda     = (none)"),
    }
    if let Some(path) = &args.out {
        write_json(path, &doc)?;
    }
    Ok(())
}

pub fn solve(noises: &[f64], n_in: usize, m_out: usize) -> Result<(), CliError> {
    let roots = last_noise_roots(noises, n_in, m_out)?;
    println!("n_{m_out} = {} (optimal)", float(roots.optimal));
    if let Some(other) = roots.other {
        println!("n_{m_out} = {} (dominated)", float(other));
    }
    Ok(())
}

pub fn synth(design_path: &Path, scheme: &str, out: Option<&Path>, tol: &Tolerances<f64>) -> Result<(), CliError> {
    let design = DesignDocument::load(design_path)?;
    let profile = design.profile()?;
    let hash = design.hash();
    let doc = match scheme {
        "amplifier" => {
            let circuit = build_interferometer(&profile, tol)?;
            let c = circuit.checks();
            println!("scheme        = amplifier");
            println!("t             = {:.12}", circuit.transmittance());
            println!("g             = {:.12}", circuit.gain());
            println!("unitarity     = {:e}", c.unitarity);
            println!("kappa gram    = {:e}", c.kappa_gram);
            println!("t in [0, 1]   = {}", c.t_in_range);
            if !c.passed(tol) {
                return Err(CliError::Input(format!(
                    "amplifier invariants violated (max residual {:e})",
                    c.max_residual()
                )));
            }
            CircuitDocument::from_amplifier(&circuit, hash)
        }
        "feedforward" => {
            let circuit = feedforward_params(&profile, tol)?;
            let c = circuit.checks(tol);
            println!("scheme        = feedforward");
            println!("r_tap         = {:.12}", circuit.tap_reflectance());
            println!("gains         = {}", fmt_list(circuit.gains()));
            println!("reflectances  = {}", fmt_list(circuit.reflectances()));
            println!("convention    = {}", circuit.phase_convention().as_str());
            println!("r_k in [0, 1] = {}", c.in_range);
            if !c.passed(tol) {
                return Err(CliError::Input(format!(
                    "feedforward invariants violated (max residual {:e}, in range {})",
                    c.max_residual(),
                    c.in_range
                )));
            }
            CircuitDocument::from_feedforward(&circuit, hash)
        }
        other => return Err(CliError::Input(format!("unknown scheme '{other}'"))),
    };
    if let Some(path) = out {
        write_json(path, &doc)?;
    }
    Ok(())
}

fn channel_errors(channel: &GaussianChannel<f64>, profile: &NoiseProfile<f64>) -> (f64, f64) {
    let reference = optimal_channel(profile);
    (max_abs_diff(channel.s(), reference.s()), max_abs_diff(channel.g(), reference.g()))
}

pub fn verify(circuit_path: &Path, out: Option<&Path>, tol: &Tolerances<f64>) -> Result<(), CliError> {
    let circuit = CircuitDocument::load(circuit_path)?.circuit(tol)?;
    let profile = circuit.profile().clone();
    let probe = Complex::new(CALIBRATION_PROBE.0, CALIBRATION_PROBE.1);
    let (checks, checks_passed, channel) = match &circuit {
        LoadedCircuit::Amplifier(c) => {
            let k = c.checks();
            let report = json!({
                "unitarity": k.unitarity,
                "kappa_gram": k.kappa_gram,
                "gain": k.gain,
                "transmittance": k.transmittance,
                "amplitude": k.amplitude,
                "idler": k.idler,
                "t_in_range": k.t_in_range,
            });
            (report, k.passed(tol), c.replica_channel()?)
        }
        LoadedCircuit::Feedforward(c) => {
            let k = c.checks(tol);
            let report = json!({
                "tap": k.tap,
                "gains": k.gains,
                "reflectances": k.reflectances,
                "mean": k.mean,
                "in_range": k.in_range,
            });
            (report, k.passed(tol), c.replica_channel()?)
        }
    };
    let (s_error, g_error) = channel_errors(&channel, &profile);
    let input = GaussianState::coherent_replicas(probe, profile.n_in());
    let output = channel.apply(&input)?;
    let mean_error = (0..profile.m_out()).fold(0.0f64, |acc, j| acc.max((output.amplitude(j) - probe).norm()));
    let cov_error = max_abs_diff(output.cov(), &optimal_clone_covariance(&profile));
    let scale = 1.0f64.max(profile.n_tot());
    let channel_passed = s_error <= tol.algebraic
        && g_error <= tol.algebraic * scale
        && cov_error <= tol.algebraic * scale
        && mean_error <= tol.algebraic;
    let passed = checks_passed && channel_passed;
    let report = json!({
        "scheme": circuit.scheme(),
        "status": if passed { "PASS" } else { "FAIL" },
        "checks": checks,
        "channel": {
            "s_error": s_error,
            "g_error": g_error,
            "clone_covariance_error": cov_error,
            "clone_mean_error": mean_error,
        },
    });
    emit_report(&report, out)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed("circuit verification FAILED".into()))
    }
}

pub fn certify(
    design_path: &Path,
    trials: usize,
    seed: u64,
    out: Option<&Path>,
    tol: &Tolerances<f64>,
) -> Result<(), CliError> {
    let design = DesignDocument::load(design_path)?;
    let profile = design.profile()?;
    let weights = match design.cost_weights()? {
        Some(w) => w,
        None => CostWeights::supporting(&profile)?,
    };
    let problem = build_problem(&profile, &weights, tol)?;
    let cert = build_certificate(&problem)?;
    let rep = verify_certificate(&problem, &cert);
    let scan = random_feasible_cost_scan(&problem, &cert, trials, seed)?;
    let equivalence = scheme_equivalence_check(&profile, Complex::new(CALIBRATION_PROBE.0, CALIBRATION_PROBE.1), tol)?;
    let passed = rep.passed() && scan.passed(tol);
    let report = json!({
        "status": if passed { "PASS" } else { "FAIL" },
        "lambda": cert.lambda,
        "eta": cert.eta,
        "weights": problem.weights.weights(),
        "primal_cost": rep.primal_cost,
        "dual_bound": rep.dual_bound,
        "duality_gap": rep.duality_gap,
        "z_min_eigenvalue": rep.z_min_eigenvalue,
        "a_opt_min_eigenvalue": rep.a_opt_min_eigenvalue,
        "complementarity": rep.complementarity,
        "normalization_error": rep.normalization_error,
        "trace_cost_discrepancy": rep.trace_cost_discrepancy,
        "extremal_identity": rep.extremal_identity,
        "y_asymmetry": rep.y_asymmetry,
        "y_linear_constraint": rep.y_linear_constraint,
        "y_f_constraint": rep.y_f_constraint,
        "projector_error": rep.projector_error,
        "block_diagonal_error": rep.block_diagonal_error,
        "noise_cost": rep.noise_cost,
        "affine_offset": rep.affine_offset,
        "scan": {
            "trials": scan.trials,
            "seed": seed,
            "min_cost": scan.min_cost,
            "min_dual_slack": scan.min_dual_slack,
            "min_feasibility": scan.min_feasibility,
            "saturation_gap": scan.saturation_gap,
        },
        "scheme_discrepancy": equivalence.max_discrepancy(),
    });
    emit_report(&report, out)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed("certificate verification FAILED".into()))
    }
}

pub struct SimulateArgs {
    pub circuit: PathBuf,
    pub alpha: Complex<f64>,
    pub shots: u64,
    pub seed: u64,
    pub shards: usize,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

pub fn simulate(args: SimulateArgs, tol: &Tolerances<f64>) -> Result<(), CliError> {
    let loaded = CircuitDocument::load(&args.circuit)?.circuit(tol)?;
    let circuit: FeedforwardCircuit<f64> = match loaded {
        LoadedCircuit::Feedforward(c) => {
            let checks = c.checks(tol);
            if !checks.passed(tol) {
                return Err(CliError::Input(format!(
                    "feedforward invariants violated (max residual {:e})",
                    checks.max_residual()
                )));
            }
            c
        }
        LoadedCircuit::Amplifier(c) => feedforward_params(c.profile(), tol)?,
    };
    let profile = circuit.profile().clone();
    let m = profile.m_out();
    let sim = Simulator::from_circuit(circuit, args.alpha, args.shots, args.seed, args.shards)?;

    let result = match &args.out {
        None => sim.run(),
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            let mut io_error = None;
            let _ = writeln!(w, "shot,clone,x,p,o_re,o_im");
            let result = sim.run_with_sink(|s: &ShotSample<'_, f64>| {
                if io_error.is_some() {
                    return;
                }
                for j in 0..m {
                    let line = writeln!(
                        w,
                        "{},{},{},{},{},{}",
                        s.shot,
                        j,
                        float(s.quadratures[j]),
                        float(s.quadratures[m + j]),
                        float(s.outcome.re),
                        float(s.outcome.im)
                    );
                    if let Err(e) = line {
                        io_error = Some(e);
                        return;
                    }
                }
            });
            if let Some(e) = io_error.or_else(|| w.flush().err()) {
                return Err(CliError::Io(format!("cannot write {}: {e}", path.display())));
            }
            result
        }
    };

    let expected_cov = optimal_clone_covariance(&profile);
    let (x, p) = (2f64.sqrt() * args.alpha.re, 2f64.sqrt() * args.alpha.im);
    let expected_mean = DVector::from_fn(2 * m, |i, _| if i < m { x } else { p });
    let rows = |mat: &nalgebra::DMatrix<f64>| -> Vec<Vec<f64>> {
        (0..mat.nrows()).map(|i| mat.row(i).iter().copied().collect()).collect()
    };
    let report = json!({
        "shots_used": result.shots_used,
        "seed": args.seed,
        "shards": args.shards,
        "alpha": [args.alpha.re, args.alpha.im],
        "phase_convention": sim.circuit().phase_convention().as_str(),
        "clone_means": result.clone_means.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
        "quadrature_means": result.quadrature_means.as_slice(),
        "mean_standard_errors": result.mean_standard_errors.as_slice(),
        "clone_cov": rows(&result.clone_cov),
        "cov_standard_errors": rows(&result.cov_standard_errors),
        "expected_clone_cov": rows(&expected_cov),
        "max_mean_z": result.mean_z_score(&expected_mean),
        "max_cov_z": result.cov_z_score(&expected_cov),
    });
    emit_report(&report, args.summary.as_deref())
}

pub fn tradeoff_csv(points: usize) -> Result<String, CliError> {
    if points < 2 {
        return Err(CliError::Input(format!("--points must be at least 2, got {points}")));
    }
    let mut text = String::from("n_F,n_G,F,G\n");
    for i in 0..points {
        let exponent = -3.0 + 6.0 * i as f64 / (points - 1) as f64;
        let pt = estimation_tradeoff(10f64.powf(exponent))?;
        text.push_str(&format!(
            "{},{},{},{}\n",
            float(pt.n_f),
            float(pt.n_g),
            float(pt.fidelity_copy),
            float(pt.fidelity_estimate)
        ));
    }
    Ok(text)
}

pub fn tradeoff(points: usize, out: Option<&Path>) -> Result<(), CliError> {
    let text = tradeoff_csv(points)?;
    match out {
        Some(path) => write_text(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
