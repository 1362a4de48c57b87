//! Command implementations: each renders its document to a string; the
//! caller decides where it goes.

use serde::Serialize;

use qpullback::basis::{gell_mann_basis, local_family};
use qpullback::linalg::{eigh, ComplexMatrix, RealMatrix, Tolerance};
use qpullback::measures::{measure_report, schlienz_mahler, tangle, trace_rr};
use qpullback::orbits::{orbit_dimension, RANK_ATOL};
use qpullback::pullback::{blocks, coadjoint_tensor, pullback_tensor, split};
use qpullback::states::{
    density_from_pure, from_fano, is_separable_pure, reduced_state, schmidt_decompose,
    schmidt_state, to_fano,
};

use crate::{CliError, LoadedState, OutputFormat};

fn complex_pairs(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn real_rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn to_json<T: Serialize>(doc: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(doc)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Input(format!("serialization failed: {e}")))
}

#[derive(Serialize)]
struct BlocksDoc {
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    c: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct TensorDoc {
    dims: [usize; 2],
    labels: Vec<String>,
    k: Vec<Vec<[f64; 2]>>,
    symmetric: Vec<Vec<f64>>,
    antisymmetric: Vec<Vec<f64>>,
    blocks: BlocksDoc,
    eigenvalues: Vec<f64>,
    orbit_dimension: Option<usize>,
}

pub fn run_tensor(state: &LoadedState) -> Result<String, CliError> {
    let n = state.equal_local_dim()?;
    let family = local_family(n, false)?;
    let tensor = pullback_tensor(&state.rho, &family)?;
    let (sym, asym) = split(&tensor);
    let bd = blocks(&sym, &family)?;
    let (eigenvalues, _) = eigh(&sym.to_complex(), &Tolerance::default())?;
    let orbit_dim = if state.rho.is_pure() {
        Some(orbit_dimension(
            &state.rho,
            &family,
            &Tolerance::new(RANK_ATOL)?,
        )?)
    } else {
        None
    };
    to_json(&TensorDoc {
        dims: [state.dims.0, state.dims.1],
        labels: tensor.labels().to_vec(),
        k: complex_pairs(tensor.k()),
        symmetric: real_rows(&sym),
        antisymmetric: real_rows(&asym),
        blocks: BlocksDoc {
            a: real_rows(bd.a()),
            b: real_rows(bd.b()),
            c: real_rows(bd.c()),
        },
        eigenvalues,
        orbit_dimension: orbit_dim,
    })
}

#[derive(Serialize)]
struct MeasuresDoc {
    dims: [usize; 2],
    schlienz_mahler: f64,
    trace_rr: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tangle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    concurrence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    segre: Option<[f64; 2]>,
    entropy: f64,
}

pub fn run_measures(state: &LoadedState, format: OutputFormat) -> Result<String, CliError> {
    let psi = state.pure_state()?;
    let report = measure_report(psi, state.dims)?;
    let doc = MeasuresDoc {
        dims: [state.dims.0, state.dims.1],
        schlienz_mahler: report.schlienz_mahler,
        trace_rr: report.trace_rr,
        tangle: report.tangle,
        concurrence: report.concurrence,
        segre: report.segre.map(|z| [z.re, z.im]),
        entropy: report.entropy,
    };
    match format {
        OutputFormat::Json => to_json(&doc),
        OutputFormat::Csv => {
            let mut out = String::from(
                "schlienz_mahler,trace_rr,tangle,concurrence,segre_re,segre_im,entropy\n",
            );
            let opt = |v: Option<f64>| v.map_or(String::new(), csv_float);
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                csv_float(doc.schlienz_mahler),
                csv_float(doc.trace_rr),
                opt(doc.tangle),
                opt(doc.concurrence),
                opt(doc.segre.map(|z| z[0])),
                opt(doc.segre.map(|z| z[1])),
                csv_float(doc.entropy),
            ));
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct SchmidtDoc {
    dims: [usize; 2],
    coefficients: Vec<f64>,
    rank: usize,
    alpha0: Option<f64>,
    left: Vec<Vec<[f64; 2]>>,
    right: Vec<Vec<[f64; 2]>>,
}

pub fn run_schmidt(state: &LoadedState) -> Result<String, CliError> {
    let psi = state.pure_state()?;
    let sd = schmidt_decompose(psi, state.dims)?;
    to_json(&SchmidtDoc {
        dims: [state.dims.0, state.dims.1],
        coefficients: sd.coefficients().to_vec(),
        rank: sd.rank(),
        alpha0: sd.alpha0(),
        left: complex_pairs(sd.left()),
        right: complex_pairs(sd.right()),
    })
}

/// 12 decimal places; every quantity in the sweep is O(1).
fn csv_float(x: f64) -> String {
    format!("{x:.12}")
}

#[derive(Serialize)]
struct SweepRow {
    alpha0: f64,
    schlienz_mahler: f64,
    tangle: f64,
    entropy: f64,
    orbit_dim: usize,
    sym_eig_max: f64,
    antisym_norm: f64,
}

fn sweep_row(alpha0: f64) -> Result<SweepRow, CliError> {
    let psi = schmidt_state(alpha0)?;
    let rho = density_from_pure(&psi);
    let family = local_family(2, false)?;
    let tensor = pullback_tensor(&rho, &family)?;
    let (sym, asym) = split(&tensor);
    let bd = blocks(&sym, &family)?;
    let (eigs, _) = eigh(&sym.to_complex(), &Tolerance::default())?;
    Ok(SweepRow {
        alpha0,
        schlienz_mahler: schlienz_mahler(bd.c(), 2)?,
        tangle: tangle(&psi)?,
        entropy: qpullback::measures::entanglement_entropy(&psi, (2, 2))?,
        orbit_dim: orbit_dimension(&rho, &family, &Tolerance::new(RANK_ATOL)?)?,
        sym_eig_max: eigs[0],
        antisym_norm: asym.max_abs(),
    })
}

pub fn run_sweep(
    start: f64,
    stop: f64,
    steps: usize,
    format: OutputFormat,
) -> Result<String, CliError> {
    if steps < 2 {
        return Err(CliError::Input(format!("sweep needs >= 2 steps, got {steps}")));
    }
    if !(0.0 <= start && start < stop && stop <= std::f64::consts::FRAC_PI_4 + 1e-12) {
        return Err(CliError::Input(format!(
            "sweep interval must satisfy 0 <= start < stop <= pi/4, got [{start}, {stop}]"
        )));
    }
    let stop = stop.min(std::f64::consts::FRAC_PI_4);
    let rows: Vec<SweepRow> = (0..steps)
        .map(|i| {
            let alpha = start + (stop - start) * i as f64 / (steps - 1) as f64;
            sweep_row(alpha)
        })
        .collect::<Result<_, _>>()?;
    match format {
        OutputFormat::Json => to_json(&rows),
        OutputFormat::Csv => {
            let mut out = String::from(
                "alpha0,schlienz_mahler,tangle,entropy,orbit_dim,sym_eig_max,antisym_norm\n",
            );
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    csv_float(r.alpha0),
                    csv_float(r.schlienz_mahler),
                    csv_float(r.tangle),
                    csv_float(r.entropy),
                    r.orbit_dim,
                    csv_float(r.sym_eig_max),
                    csv_float(r.antisym_norm),
                ));
            }
            Ok(out)
        }
    }
}

struct Check {
    name: &'static str,
    residual: f64,
    tol: f64,
    note: Option<String>,
}

impl Check {
    fn passed(&self) -> bool {
        self.residual <= self.tol
    }
}

/// Structural invariant suite for a pure bipartite state. The base tolerance
/// covers the exact identities; the conditional separability statements use
/// ten times the base, matching their looser analytical guarantees.
pub fn run_verify(state: &LoadedState, tol: f64) -> Result<String, CliError> {
    state.pure_state()?;
    let n = state.equal_local_dim()?;
    if tol <= 0.0 || !tol.is_finite() {
        return Err(CliError::Input(format!("--tol must be positive, got {tol}")));
    }
    let loose = 10.0 * tol;
    let family = local_family(n, false)?;
    let basis = gell_mann_basis(n)?;
    let rho = &state.rho;
    let su = n * n - 1;

    let tensor = pullback_tensor(rho, &family)?;
    let k = tensor.k();
    let (sym, asym) = split(&tensor);
    let bd = blocks(&sym, &family)?;
    let mut checks = Vec::new();

    checks.push(Check {
        name: "hermiticity of K",
        residual: k.max_abs_diff(&k.dagger())? / 2.0,
        tol,
        note: None,
    });

    let mut asym_mixed: f64 = 0.0;
    for j in 0..su {
        for l in su..2 * su {
            asym_mixed = asym_mixed.max(asym[(j, l)].abs()).max(asym[(l, j)].abs());
        }
    }
    checks.push(Check {
        name: "antisymmetric mixed block vanishes",
        residual: asym_mixed,
        tol,
        note: None,
    });

    // maximal entanglement  =>  flat symplectic part
    let reduced = reduced_state(rho, state.dims, 1)?;
    let flat = ComplexMatrix::identity(n).scale(num_complex::Complex64::new(1.0 / n as f64, 0.0));
    let ent_dev = reduced.matrix().max_abs_diff(&flat)?;
    if ent_dev <= tol {
        checks.push(Check {
            name: "maximal entanglement: symplectic part vanishes",
            residual: asym.max_abs(),
            tol: loose,
            note: None,
        });
    } else {
        checks.push(Check {
            name: "maximal entanglement: symplectic part vanishes",
            residual: 0.0,
            tol: loose,
            note: Some(format!(
                "not applicable: reduced state deviates from 1/N by {ent_dev:.3e}"
            )),
        });
    }

    // separability  <=>  vanishing mixed block
    let separable = is_separable_pure(rho, &basis, &Tolerance::new(loose)?)?;
    let mut mixed_max: f64 = 0.0;
    for j in 0..su {
        for l in su..2 * su {
            mixed_max = mixed_max.max(k[(j, l)].norm()).max(k[(l, j)].norm());
        }
    }
    if separable {
        checks.push(Check {
            name: "separable state: mixed block vanishes",
            residual: mixed_max,
            tol: loose,
            note: None,
        });
    } else {
        checks.push(Check {
            name: "entangled state: mixed block present",
            residual: if mixed_max > loose { 0.0 } else { 1.0 },
            tol: 0.5,
            note: Some(format!("mixed block max entry {mixed_max:.3e}")),
        });
    }

    checks.push(Check {
        name: "coadjoint tensor reduces to K on pure states",
        residual: coadjoint_tensor(rho, &family)?.max_abs_diff(k)?,
        tol,
        note: None,
    });

    let fano = to_fano(rho, &basis)?;
    checks.push(Check {
        name: "Fano round-trip",
        residual: from_fano(&fano, &basis)?.matrix().max_abs_diff(rho.matrix())?,
        tol,
        note: None,
    });

    checks.push(Check {
        name: "Tr(RR^dagger) = tr(C^T C) / 4",
        residual: (trace_rr(rho, state.dims)? - bd.c().frobenius_sq() / 4.0).abs(),
        tol,
        note: None,
    });

    let mut out = String::new();
    let mut failures = Vec::new();
    for check in &checks {
        let verdict = if check.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{verdict}  {:<48} residual {:>10.3e}  (tol {:.1e})",
            check.name, check.residual, check.tol
        ));
        if let Some(note) = &check.note {
            out.push_str(&format!("  [{note}]"));
        }
        out.push('\n');
        if !check.passed() {
            failures.push(check.name);
        }
    }
    if failures.is_empty() {
        out.push_str(&format!("all {} checks passed\n", checks.len()));
        Ok(out)
    } else {
        out.push_str(&format!("failed checks: {}\n", failures.join(", ")));
        // the report is the command output; the caller routes it and exits 1
        Err(CliError::VerifyFailed(out))
    }
}
