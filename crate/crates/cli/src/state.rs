//! State ingestion: presets, inline JSON, or JSON files.
//!
//! Pure states: `{"dims": [d1, d2], "amplitudes": [[re, im], ...]}`.
//! Density matrices: `{"dims": [d1, d2], "matrix": [[[re, im], ...], ...]}`.
//! Amplitude order is the Kronecker order with the left slot major.

use num_complex::Complex64;
use serde::Deserialize;

use qpullback::linalg::ComplexMatrix;
use qpullback::orbits::{random_pure_state, RngSeed};
use qpullback::states::{density_from_pure, schmidt_state, DensityMatrix, PureState};

use crate::{CliError, StateArgs};

/// Where the state came from; kept for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSource {
    Preset(String),
    InlineJson,
    File(std::path::PathBuf),
}

/// A parsed state: always a density matrix, plus the state vector when the
/// input was pure.
#[derive(Debug, Clone)]
pub struct LoadedState {
    pub source: StateSource,
    pub dims: (usize, usize),
    pub rho: DensityMatrix,
    pub psi: Option<PureState>,
}

impl LoadedState {
    /// Equal local dimension N, required by the generator machinery.
    pub fn equal_local_dim(&self) -> Result<usize, CliError> {
        if self.dims.0 != self.dims.1 {
            return Err(CliError::Input(format!(
                "this command requires equal local dimensions, got ({}, {})",
                self.dims.0, self.dims.1
            )));
        }
        Ok(self.dims.0)
    }

    pub fn pure_state(&self) -> Result<&PureState, CliError> {
        self.psi.as_ref().ok_or_else(|| {
            CliError::Input("this command requires a pure state (vector) input".into())
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum StateJson {
    Pure {
        dims: [usize; 2],
        amplitudes: Vec<[f64; 2]>,
    },
    Density {
        dims: [usize; 2],
        matrix: Vec<Vec<[f64; 2]>>,
    },
}

pub fn load(
    args: &StateArgs,
    dims_flag: Option<(usize, usize)>,
    seed: u64,
    degrees: bool,
) -> Result<LoadedState, CliError> {
    match (&args.preset, &args.json, &args.file) {
        (Some(p), None, None) => load_preset(p, dims_flag, seed, degrees),
        (None, Some(text), None) => parse_json(text, dims_flag, StateSource::InlineJson),
        (None, None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            parse_json(&text, dims_flag, StateSource::File(path.clone()))
        }
        _ => Err(CliError::Input(
            "specify exactly one of --preset, --json, --file".into(),
        )),
    }
}

fn load_preset(
    preset: &str,
    dims_flag: Option<(usize, usize)>,
    seed: u64,
    degrees: bool,
) -> Result<LoadedState, CliError> {
    let dims = dims_flag.unwrap_or((2, 2));
    let source = StateSource::Preset(preset.to_string());

    let (name, param) = match preset.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (preset, None),
    };

    let psi = match (name, param) {
        ("product", None) => {
            require_two_qubits(dims, "product")?;
            schmidt_state(0.0).map_err(CliError::from)?
        }
        ("bell", None) => {
            require_two_qubits(dims, "bell")?;
            schmidt_state(std::f64::consts::FRAC_PI_4).map_err(CliError::from)?
        }
        ("schmidt", Some(angle)) => {
            require_two_qubits(dims, "schmidt")?;
            let alpha: f64 = angle
                .parse()
                .map_err(|_| CliError::Input(format!("invalid Schmidt angle '{angle}'")))?;
            let alpha = if degrees { alpha.to_radians() } else { alpha };
            schmidt_state(alpha).map_err(CliError::from)?
        }
        ("random", param) => {
            let seed = match param {
                Some(s) => s
                    .parse()
                    .map_err(|_| CliError::Input(format!("invalid seed '{s}'")))?,
                None => seed,
            };
            random_pure_state(dims.0 * dims.1, RngSeed(seed)).map_err(CliError::from)?
        }
        _ => {
            return Err(CliError::Input(format!(
                "unknown preset '{preset}'; expected product, bell, schmidt:<alpha0>, random[:<seed>]"
            )))
        }
    };

    Ok(LoadedState {
        source,
        dims,
        rho: density_from_pure(&psi),
        psi: Some(psi),
    })
}

fn require_two_qubits(dims: (usize, usize), preset: &str) -> Result<(), CliError> {
    if dims != (2, 2) {
        return Err(CliError::Input(format!(
            "preset '{preset}' is a two-qubit state; it needs --dims 2 2"
        )));
    }
    Ok(())
}

fn parse_json(
    text: &str,
    dims_flag: Option<(usize, usize)>,
    source: StateSource,
) -> Result<LoadedState, CliError> {
    let doc: StateJson = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("cannot parse state JSON: {e}")))?;
    match doc {
        StateJson::Pure { dims, amplitudes } => {
            let dims = check_dims((dims[0], dims[1]), dims_flag)?;
            if amplitudes.len() != dims.0 * dims.1 {
                return Err(CliError::Input(format!(
                    "state has {} amplitudes, dims ({}, {}) require {}",
                    amplitudes.len(),
                    dims.0,
                    dims.1,
                    dims.0 * dims.1
                )));
            }
            let amps = amplitudes
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            let psi = PureState::new(amps).map_err(CliError::from)?;
            Ok(LoadedState {
                source,
                dims,
                rho: density_from_pure(&psi),
                psi: Some(psi),
            })
        }
        StateJson::Density { dims, matrix } => {
            let dims = check_dims((dims[0], dims[1]), dims_flag)?;
            let total = dims.0 * dims.1;
            if matrix.len() != total || matrix.iter().any(|row| row.len() != total) {
                return Err(CliError::Input(format!(
                    "density matrix must be {total}x{total} for dims ({}, {})",
                    dims.0, dims.1
                )));
            }
            let entries = matrix
                .iter()
                .flatten()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            let m = ComplexMatrix::from_entries(total, total, entries).map_err(CliError::from)?;
            let rho = DensityMatrix::new(m).map_err(CliError::from)?;
            Ok(LoadedState {
                source,
                dims,
                rho,
                psi: None,
            })
        }
    }
}

fn check_dims(
    embedded: (usize, usize),
    dims_flag: Option<(usize, usize)>,
) -> Result<(usize, usize), CliError> {
    if embedded.0 < 1 || embedded.1 < 1 {
        return Err(CliError::Input(format!(
            "state dims must be positive, got ({}, {})",
            embedded.0, embedded.1
        )));
    }
    if let Some(flag) = dims_flag {
        if flag != embedded {
            return Err(CliError::Input(format!(
                "--dims ({}, {}) disagrees with the state document dims ({}, {})",
                flag.0, flag.1, embedded.0, embedded.1
            )));
        }
    }
    Ok(embedded)
}
