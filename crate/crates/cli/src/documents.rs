//! On-disk formats: design and circuit documents.

use std::fs;
use std::path::Path;

use gaussclone::{
    AmplifierCircuit, CostWeights, FeedforwardCircuit, NoiseProfile, PhaseConvention, Tolerances,
};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::format::to_json;

pub const SCHEMA_VERSION: u32 = 1;

/// Stored and recomputed residuals may differ by at most this much.
pub const RESIDUAL_MATCH: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignDocument {
    pub schema_version: u32,
    #[serde(rename = "N")]
    pub n_in: usize,
    #[serde(rename = "M")]
    pub m_out: usize,
    pub noises: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub residual: f64,
    pub fidelities: Vec<f64>,
}

impl DesignDocument {
    pub fn from_profile(profile: &NoiseProfile<f64>, weights: Option<&CostWeights<f64>>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n_in: profile.n_in(),
            m_out: profile.m_out(),
            noises: profile.noises().to_vec(),
            weights: weights.map(|w| w.weights().to_vec()),
            lambda: weights.and_then(|w| w.lambda()),
            residual: profile.residual(),
            fidelities: profile.fidelities(),
        }
    }

    /// Validates the document and rebuilds its profile.
    pub fn profile(&self) -> Result<NoiseProfile<f64>, CliError> {
        check_schema(self.schema_version)?;
        let profile = NoiseProfile::new(self.n_in, self.m_out, self.noises.clone())?;
        let recomputed = profile.residual();
        if !((recomputed - self.residual).abs() <= RESIDUAL_MATCH) {
            return Err(CliError::Input(format!(
                "stored residual {} does not match recomputed residual {}",
                self.residual, recomputed
            )));
        }
        Ok(profile)
    }

    pub fn cost_weights(&self) -> Result<Option<CostWeights<f64>>, CliError> {
        let Some(w) = &self.weights else { return Ok(None) };
        let weights = CostWeights::new(w.clone())?;
        Ok(Some(match self.lambda {
            Some(l) => weights.with_lambda(l),
            None => weights,
        }))
    }

    /// SHA-256 of the canonical serialization, independent of file layout.
    pub fn hash(&self) -> String {
        let canonical = to_json(self).expect("design documents always serialize");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        read_json(path)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub design_sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplifierParameters {
    pub t: f64,
    pub g: f64,
    /// Row-major `M x M`.
    pub v: Vec<f64>,
    /// Row-major `M x (M-1)`.
    pub kappa: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedforwardParameters {
    pub r_tap: f64,
    pub gains: Vec<f64>,
    pub reflectances: Vec<f64>,
    pub phase_convention: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", content = "parameters", rename_all = "lowercase")]
pub enum SchemeParameters {
    Amplifier(AmplifierParameters),
    Feedforward(FeedforwardParameters),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitDocument {
    pub schema_version: u32,
    #[serde(rename = "N")]
    pub n_in: usize,
    #[serde(rename = "M")]
    pub m_out: usize,
    pub noises: Vec<f64>,
    #[serde(flatten)]
    pub scheme: SchemeParameters,
    pub provenance: Provenance,
}

/// A circuit rebuilt from its document.
pub enum LoadedCircuit {
    Amplifier(AmplifierCircuit<f64>),
    Feedforward(FeedforwardCircuit<f64>),
}

impl LoadedCircuit {
    pub fn profile(&self) -> &NoiseProfile<f64> {
        match self {
            Self::Amplifier(c) => c.profile(),
            Self::Feedforward(c) => c.profile(),
        }
    }

    pub fn scheme(&self) -> &'static str {
        match self {
            Self::Amplifier(_) => "amplifier",
            Self::Feedforward(_) => "feedforward",
        }
    }
}

impl CircuitDocument {
    pub fn from_amplifier(circuit: &AmplifierCircuit<f64>, design_sha256: String) -> Self {
        let p = circuit.profile();
        Self {
            schema_version: SCHEMA_VERSION,
            n_in: p.n_in(),
            m_out: p.m_out(),
            noises: p.noises().to_vec(),
            scheme: SchemeParameters::Amplifier(AmplifierParameters {
                t: circuit.transmittance(),
                g: circuit.gain(),
                v: row_major(circuit.interferometer()),
                kappa: row_major(circuit.kappa()),
            }),
            provenance: Provenance { design_sha256 },
        }
    }

    pub fn from_feedforward(circuit: &FeedforwardCircuit<f64>, design_sha256: String) -> Self {
        let p = circuit.profile();
        Self {
            schema_version: SCHEMA_VERSION,
            n_in: p.n_in(),
            m_out: p.m_out(),
            noises: p.noises().to_vec(),
            scheme: SchemeParameters::Feedforward(FeedforwardParameters {
                r_tap: circuit.tap_reflectance(),
                gains: circuit.gains().to_vec(),
                reflectances: circuit.reflectances().to_vec(),
                phase_convention: circuit.phase_convention().as_str().to_string(),
            }),
            provenance: Provenance { design_sha256 },
        }
    }

    /// Rebuilds the circuit. Shapes and the noise condition are enforced
    /// here; the remaining scheme invariants are left to the caller so that
    /// `verify` can report on them.
    pub fn circuit(&self, tol: &Tolerances<f64>) -> Result<LoadedCircuit, CliError> {
        check_schema(self.schema_version)?;
        let profile = NoiseProfile::new(self.n_in, self.m_out, self.noises.clone())?;
        profile.require_optimal(tol)?;
        let m = self.m_out;
        Ok(match &self.scheme {
            SchemeParameters::Amplifier(a) => {
                let v = from_row_major(m, m, &a.v, "v")?;
                let kappa = from_row_major(m, m.saturating_sub(1), &a.kappa, "kappa")?;
                LoadedCircuit::Amplifier(AmplifierCircuit::from_parts(profile, a.t, a.g, v, kappa)?)
            }
            SchemeParameters::Feedforward(f) => {
                let convention: PhaseConvention = f
                    .phase_convention
                    .parse()
                    .map_err(|_| CliError::Input(format!("unknown phase convention '{}'", f.phase_convention)))?;
                LoadedCircuit::Feedforward(FeedforwardCircuit::from_parts(
                    profile,
                    f.r_tap,
                    f.gains.clone(),
                    f.reflectances.clone(),
                    convention,
                )?)
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        read_json(path)
    }
}

fn check_schema(version: u32) -> Result<(), CliError> {
    if version != SCHEMA_VERSION {
        return Err(CliError::Input(format!(
            "unsupported schema_version {version}; this build reads version {SCHEMA_VERSION}"
        )));
    }
    Ok(())
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

fn from_row_major(rows: usize, cols: usize, data: &[f64], name: &str) -> Result<DMatrix<f64>, CliError> {
    if data.len() != rows * cols {
        return Err(CliError::Input(format!(
            "{name} needs {} entries ({rows}x{cols}), found {}",
            rows * cols,
            data.len()
        )));
    }
    Ok(DMatrix::from_row_slice(rows, cols, data))
}

fn read_json<D: for<'de> Deserialize<'de>>(path: &Path) -> Result<D, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("malformed {}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json<V: Serialize>(path: &Path, value: &V) -> Result<(), CliError> {
    let text = to_json(value).map_err(|e| CliError::Io(e.to_string()))?;
    write_text(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_round_trip_preserves_residual() {
        let p = NoiseProfile::new(1, 3, vec![0.5, 0.5, 2.0]).unwrap();
        let doc = DesignDocument::from_profile(&p, None);
        let text = to_json(&doc).unwrap();
        let back: DesignDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.profile().unwrap().residual(), p.residual());
        assert_eq!(back.hash(), doc.hash());
    }

    #[test]
    fn tampered_residual_rejected() {
        let p = NoiseProfile::new(1, 2, vec![0.5, 0.5]).unwrap();
        let mut doc = DesignDocument::from_profile(&p, None);
        doc.residual = 1e-6;
        assert!(doc.profile().is_err());
    }

    #[test]
    fn row_major_round_trip() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(row_major(&m), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(from_row_major(2, 3, &row_major(&m), "m").unwrap(), m);
    }
}
