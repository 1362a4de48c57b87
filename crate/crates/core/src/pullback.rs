//! The pulled-back Hermitian tensor on local-unitary orbits.
//!
//! `pullback_tensor` evaluates the defining traces directly; it is the
//! in-repo oracle against which the closed-form Fano route
//! (`fano_block_coefficients`) is always cross-validated. The real part of K
//! is the Riemannian (Gram) matrix, the imaginary part the pre-symplectic
//! two-form, and the A/B/C block split of the real part separates local from
//! mixed correlations.

use num_complex::Complex64;

use crate::basis::{LocalGeneratorFamily, StructureConstants};
use crate::linalg::{matmul, trace, ComplexMatrix, RealMatrix, Tolerance};
use crate::states::{DensityMatrix, FanoForm};
use crate::{Error, Result};

/// Coefficient matrix K_jk of the pulled-back Hermitian tensor, indexed by
/// the one-form slots theta^j (x) theta^k of the generator family.
#[derive(Debug, Clone)]
pub struct PullbackTensor {
    k: ComplexMatrix,
    labels: Vec<String>,
    fiducial: DensityMatrix,
}

impl PullbackTensor {
    pub fn k(&self) -> &ComplexMatrix {
        &self.k
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The state the tensor was computed at.
    pub fn fiducial(&self) -> &DensityMatrix {
        &self.fiducial
    }

    pub fn len(&self) -> usize {
        self.k.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.k.rows() == 0
    }
}

/// K_jk = Tr(rho0 R_j R_k) - Tr(rho0 R_j) Tr(rho0 R_k), by direct trace
/// evaluation.
pub fn pullback_tensor(
    rho0: &DensityMatrix,
    family: &LocalGeneratorFamily,
) -> Result<PullbackTensor> {
    if rho0.dim() != family.dim() {
        return Err(Error::Shape(format!(
            "state dimension {} does not match generator dimension {}",
            rho0.dim(),
            family.dim()
        )));
    }
    let m = family.len();
    // rho R_j, reused across the row and for the expectation values
    let rho_r: Vec<ComplexMatrix> = family
        .generators()
        .iter()
        .map(|r| matmul(rho0.matrix(), r))
        .collect::<Result<_>>()?;
    let expectations: Vec<Complex64> = rho_r.iter().map(trace).collect::<Result<_>>()?;

    let mut k = ComplexMatrix::zeros(m, m);
    for j in 0..m {
        for l in 0..m {
            let second_moment = trace(&matmul(&rho_r[j], family.generator(l))?)?;
            k[(j, l)] = second_moment - expectations[j] * expectations[l];
        }
    }
    if !crate::linalg::is_hermitian(&k, &Tolerance::default())? {
        return Err(Error::Inconsistency(
            "pull-back coefficients are not Hermitian; inputs violated their contracts".into(),
        ));
    }
    Ok(PullbackTensor {
        k,
        labels: family.labels().to_vec(),
        fiducial: rho0.clone(),
    })
}

/// Splits K into its real symmetric and imaginary antisymmetric parts;
/// K reassembles exactly as `symmetric + i antisymmetric`.
pub fn split(tensor: &PullbackTensor) -> (RealMatrix, RealMatrix) {
    (tensor.k.re(), tensor.k.im())
}

/// The A/B/C blocks of the symmetric part: A and B are the subsystem-diagonal
/// blocks, and the two block-off-diagonal copies of C are equal up to
/// transposition.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    a: RealMatrix,
    b: RealMatrix,
    c: RealMatrix,
}

impl BlockDecomposition {
    pub fn a(&self) -> &RealMatrix {
        &self.a
    }

    pub fn b(&self) -> &RealMatrix {
        &self.b
    }

    pub fn c(&self) -> &RealMatrix {
        &self.c
    }

    /// Reassembles [[A, C], [C^T, B]].
    pub fn assemble(&self) -> RealMatrix {
        let su = self.a.rows();
        RealMatrix::from_fn(2 * su, 2 * su, |i, j| match (i < su, j < su) {
            (true, true) => self.a[(i, j)],
            (true, false) => self.c[(i, j - su)],
            (false, true) => self.c[(j, i - su)],
            (false, false) => self.b[(i - su, j - su)],
        })
    }
}

/// Extracts the A/B/C blocks from the symmetric part of K. Defined on the
/// SU(N) directions only; families carrying identity directions are
/// rejected.
pub fn blocks(
    symmetric: &RealMatrix,
    family: &LocalGeneratorFamily,
) -> Result<BlockDecomposition> {
    if family.include_identity() {
        return Err(Error::Domain(
            "block decomposition is defined on the su(N) basis; drop the identity directions"
                .into(),
        ));
    }
    let su = family.n() * family.n() - 1;
    if symmetric.rows() != 2 * su || symmetric.cols() != 2 * su {
        return Err(Error::Shape(format!(
            "symmetric part is {}x{}, expected {}x{}",
            symmetric.rows(),
            symmetric.cols(),
            2 * su,
            2 * su
        )));
    }
    let a = RealMatrix::from_fn(su, su, |i, j| symmetric[(i, j)]);
    let b = RealMatrix::from_fn(su, su, |i, j| symmetric[(i + su, j + su)]);
    let c = RealMatrix::from_fn(su, su, |i, j| symmetric[(i, j + su)]);
    let lower = RealMatrix::from_fn(su, su, |i, j| symmetric[(i + su, j)]);
    let dev = c.transpose().max_abs_diff(&lower)?;
    if dev > 1e-12 {
        return Err(Error::Inconsistency(format!(
            "off-diagonal blocks differ by {dev:.3e}; input is not a symmetric pull-back"
        )));
    }
    Ok(BlockDecomposition { a, b, c })
}

/// Closed-form blocks from Fano data:
///
/// ```text
/// A_ab = (2/N) delta_ab + n_c d_abc - n_a n_b
/// B_ab = (2/N) delta_ab + m_c d_abc - m_a m_b
/// C_ab = t_ab - n_a m_b
/// ```
///
/// The d-term enters with unit coefficient: expanding
/// Tr(rho [sigma_a, sigma_b]+ (x) 1) over the anticommutator relation gives
/// `(2/N) delta_ab Tr(rho) + d_abc n_c` with no extra factor, and the direct
/// trace route confirms this numerically for N = 3.
pub fn fano_block_coefficients(
    fano: &FanoForm,
    sc: &StructureConstants,
) -> Result<BlockDecomposition> {
    let su = sc.dim();
    if fano.n().len() != su || fano.m().len() != su || fano.t().rows() != su {
        return Err(Error::Shape(format!(
            "Fano coefficients have {} directions, structure constants {su}",
            fano.n().len()
        )));
    }
    let diagonal_block = |v: &[f64]| {
        RealMatrix::from_fn(su, su, |a, b| {
            let delta = if a == b { sc.delta_coeff() } else { 0.0 };
            let d_term: f64 = (0..su).map(|c| v[c] * sc.d(a, b, c)).sum();
            delta + d_term - v[a] * v[b]
        })
    };
    let a = diagonal_block(fano.n());
    let b = diagonal_block(fano.m());
    let c = RealMatrix::from_fn(su, su, |i, j| fano.t()[(i, j)] - fano.n()[i] * fano.m()[j]);
    Ok(BlockDecomposition { a, b, c })
}

/// Coefficients of the coadjoint-orbit tensor Tr(rho drho (x) drho):
///
/// ```text
/// M_jk = -Tr(rho0 [R_j, rho0] [R_k, rho0])
/// ```
///
/// with raw commutators [X, Y] = XY - YX. The equivalent three-term
/// expansion Tr(rho^3 R_j R_k) - 2 Tr(rho^2 R_j rho R_k) + Tr(rho^2 R_k rho
/// R_j) is evaluated as well and both routes must agree. For pure states the
/// result coincides with [`pullback_tensor`].
pub fn coadjoint_tensor(
    rho0: &DensityMatrix,
    family: &LocalGeneratorFamily,
) -> Result<ComplexMatrix> {
    if rho0.dim() != family.dim() {
        return Err(Error::Shape(format!(
            "state dimension {} does not match generator dimension {}",
            rho0.dim(),
            family.dim()
        )));
    }
    let m = family.len();
    let rho = rho0.matrix();
    let rho2 = matmul(rho, rho)?;
    let rho3 = matmul(&rho2, rho)?;
    let commutators: Vec<ComplexMatrix> = family
        .generators()
        .iter()
        .map(|r| matmul(r, rho)?.sub(&matmul(rho, r)?))
        .collect::<Result<_>>()?;

    let mut direct = ComplexMatrix::zeros(m, m);
    let mut expansion = ComplexMatrix::zeros(m, m);
    for j in 0..m {
        let rj = family.generator(j);
        let rho2_rj = matmul(&rho2, rj)?;
        let rho3_rj = matmul(&rho3, rj)?;
        for l in 0..m {
            let rl = family.generator(l);
            direct[(j, l)] = -trace(&matmul(rho, &matmul(&commutators[j], &commutators[l])?)?)?;
            let t1 = trace(&matmul(&rho3_rj, rl)?)?;
            let t2 = trace(&matmul(&matmul(&rho2_rj, rho)?, rl)?)?;
            let t3 = trace(&matmul(&matmul(&matmul(&rho2, rl)?, rho)?, rj)?)?;
            expansion[(j, l)] = t1 - 2.0 * t2 + t3;
        }
    }
    let dev = direct.max_abs_diff(&expansion)?;
    if dev > 1e-9 {
        return Err(Error::Inconsistency(format!(
            "coadjoint tensor routes disagree by {dev:.3e}"
        )));
    }
    Ok(direct)
}

/// Indices of generators commuting with the state: the coadjoint tensor is
/// degenerate along these directions (its rows and columns there vanish).
pub fn degeneracy_directions(
    rho0: &DensityMatrix,
    family: &LocalGeneratorFamily,
    tol: &Tolerance,
) -> Result<Vec<usize>> {
    if rho0.dim() != family.dim() {
        return Err(Error::Shape(format!(
            "state dimension {} does not match generator dimension {}",
            rho0.dim(),
            family.dim()
        )));
    }
    let rho = rho0.matrix();
    let mut out = Vec::new();
    for (j, r) in family.generators().iter().enumerate() {
        let comm = matmul(r, rho)?.sub(&matmul(rho, r)?)?;
        if comm.max_abs() <= tol.atol() {
            out.push(j);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{gell_mann_basis, local_family, structure_constants};
    use crate::linalg::is_hermitian;
    use crate::orbits::{random_pure_state, RngSeed};
    use crate::states::{density_from_pure, schmidt_state, to_fano};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// The 6x6 two-qubit tensor for the Schmidt family, entry by entry.
    fn golden_k(alpha0: f64) -> ComplexMatrix {
        let s = (2.0 * alpha0).sin();
        let co = (2.0 * alpha0).cos();
        let s2 = s * s;
        let rows: [[Complex64; 6]; 6] = [
            [c(1., 0.), c(0., co), c(0., 0.), c(s, 0.), c(0., 0.), c(0., 0.)],
            [c(0., -co), c(1., 0.), c(0., 0.), c(0., 0.), c(-s, 0.), c(0., 0.)],
            [c(0., 0.), c(0., 0.), c(s2, 0.), c(0., 0.), c(0., 0.), c(s2, 0.)],
            [c(s, 0.), c(0., 0.), c(0., 0.), c(1., 0.), c(0., co), c(0., 0.)],
            [c(0., 0.), c(-s, 0.), c(0., 0.), c(0., -co), c(1., 0.), c(0., 0.)],
            [c(0., 0.), c(0., 0.), c(s2, 0.), c(0., 0.), c(0., 0.), c(s2, 0.)],
        ];
        ComplexMatrix::from_fn(6, 6, |i, j| rows[i][j])
    }

    #[test]
    fn schmidt_family_tensor_matches_golden_pattern() {
        let family = local_family(2, false).unwrap();
        for alpha in [0.0, FRAC_PI_8, 0.3, FRAC_PI_4] {
            let rho = density_from_pure(&schmidt_state(alpha).unwrap());
            let tensor = pullback_tensor(&rho, &family).unwrap();
            let dev = tensor.k().max_abs_diff(&golden_k(alpha)).unwrap();
            assert!(dev < 1e-12, "alpha0 = {alpha}: deviation {dev:.3e}");
        }
    }

    #[test]
    fn maximally_mixed_state_has_unit_diagonal() {
        let family = local_family(2, false).unwrap();
        let rho =
            DensityMatrix::new(ComplexMatrix::identity(4).scale(c(0.25, 0.))).unwrap();
        let tensor = pullback_tensor(&rho, &family).unwrap();
        for j in 0..6 {
            assert!((tensor.k()[(j, j)] - c(1., 0.)).norm() < 1e-12);
        }
        // traceless generators: the subtraction term vanishes, so K_jk is
        // just Tr(rho R_j R_k)
        for j in 0..6 {
            for l in 0..6 {
                let direct = trace(
                    &matmul(
                        rho.matrix(),
                        &matmul(family.generator(j), family.generator(l)).unwrap(),
                    )
                    .unwrap(),
                )
                .unwrap();
                assert!((tensor.k()[(j, l)] - direct).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_directions_have_vanishing_rows() {
        let family = local_family(2, true).unwrap();
        let pure = density_from_pure(&schmidt_state(0.4).unwrap());
        let mixed =
            DensityMatrix::new(ComplexMatrix::identity(4).scale(c(0.25, 0.))).unwrap();
        for rho in [&pure, &mixed] {
            let tensor = pullback_tensor(rho, &family).unwrap();
            for j in [3usize, 7] {
                for l in 0..8 {
                    assert!(tensor.k()[(j, l)].norm() < 1e-12);
                    assert!(tensor.k()[(l, j)].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn pullback_rejects_dimension_mismatch() {
        let family = local_family(3, false).unwrap();
        let rho = density_from_pure(&schmidt_state(0.1).unwrap());
        assert!(matches!(
            pullback_tensor(&rho, &family),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn split_reassembles_and_matches_the_displayed_parts() {
        let family = local_family(2, false).unwrap();
        let alpha = 0.3;
        let rho = density_from_pure(&schmidt_state(alpha).unwrap());
        let tensor = pullback_tensor(&rho, &family).unwrap();
        let (sym, asym) = split(&tensor);
        // reassembly is exact
        for i in 0..6 {
            for j in 0..6 {
                let z = c(sym[(i, j)], asym[(i, j)]);
                assert_eq!(z, tensor.k()[(i, j)]);
            }
        }
        // imaginary part carries +-cos(2 alpha) in the (1,2) and (4,5) slots
        let co = (2.0 * alpha).cos();
        for i in 0..6 {
            for j in 0..6 {
                let expected = match (i, j) {
                    (0, 1) | (3, 4) => co,
                    (1, 0) | (4, 3) => -co,
                    _ => 0.0,
                };
                assert!((asym[(i, j)] - expected).abs() < 1e-12);
                assert!((sym[(i, j)] - sym[(j, i)]).abs() < 1e-12);
                assert!((asym[(i, j)] + asym[(j, i)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn antisymmetric_part_vanishes_for_bell_state() {
        let family = local_family(2, false).unwrap();
        let rho = density_from_pure(&schmidt_state(FRAC_PI_4).unwrap());
        let (_, asym) = split(&pullback_tensor(&rho, &family).unwrap());
        assert!(asym.max_abs() < 1e-12);
    }

    #[test]
    fn blocks_of_the_schmidt_family() {
        let family = local_family(2, false).unwrap();
        let alpha: f64 = 0.35;
        let s = (2.0 * alpha).sin();
        let rho = density_from_pure(&schmidt_state(alpha).unwrap());
        let (sym, _) = split(&pullback_tensor(&rho, &family).unwrap());
        let bd = blocks(&sym, &family).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let diag_expected = match (i, j) {
                    (0, 0) | (1, 1) => 1.0,
                    (2, 2) => s * s,
                    _ => 0.0,
                };
                let c_expected = match (i, j) {
                    (0, 0) => s,
                    (1, 1) => -s,
                    (2, 2) => s * s,
                    _ => 0.0,
                };
                assert!((bd.a()[(i, j)] - diag_expected).abs() < 1e-12);
                assert!((bd.b()[(i, j)] - diag_expected).abs() < 1e-12);
                assert!((bd.c()[(i, j)] - c_expected).abs() < 1e-12);
            }
        }
        assert!(bd.assemble().max_abs_diff(&sym).unwrap() < 1e-14);
    }

    #[test]
    fn product_state_has_zero_mixed_block() {
        let family = local_family(2, false).unwrap();
        let rho = density_from_pure(&schmidt_state(0.0).unwrap());
        let (sym, _) = split(&pullback_tensor(&rho, &family).unwrap());
        let bd = blocks(&sym, &family).unwrap();
        assert!(bd.c().max_abs() < 1e-12);
    }

    #[test]
    fn blocks_reject_identity_directions() {
        let family = local_family(2, true).unwrap();
        let sym = RealMatrix::zeros(8, 8);
        assert!(matches!(blocks(&sym, &family), Err(Error::Domain(_))));
    }

    #[test]
    fn fano_blocks_match_direct_blocks_for_two_qubits() {
        // at N = 2 the d tensor vanishes and A_ab = delta_ab - n_a n_b
        let family = local_family(2, false).unwrap();
        let basis = gell_mann_basis(2).unwrap();
        let sc = structure_constants(&basis).unwrap();
        let alpha = 0.3;
        let rho = density_from_pure(&schmidt_state(alpha).unwrap());
        let direct = blocks(&split(&pullback_tensor(&rho, &family).unwrap()).0, &family).unwrap();
        let fano = fano_block_coefficients(&to_fano(&rho, &basis).unwrap(), &sc).unwrap();
        assert!(direct.a().max_abs_diff(fano.a()).unwrap() < 1e-12);
        assert!(direct.b().max_abs_diff(fano.b()).unwrap() < 1e-12);
        assert!(direct.c().max_abs_diff(fano.c()).unwrap() < 1e-12);
    }

    #[test]
    fn fano_blocks_match_direct_blocks_for_qutrits() {
        // N = 3 exercises the d term and pins its unit coefficient
        let family = local_family(3, false).unwrap();
        let basis = gell_mann_basis(3).unwrap();
        let sc = structure_constants(&basis).unwrap();
        for seed in 0..5 {
            let psi = random_pure_state(9, RngSeed(seed)).unwrap();
            let rho = density_from_pure(&psi);
            let direct =
                blocks(&split(&pullback_tensor(&rho, &family).unwrap()).0, &family).unwrap();
            let fano = fano_block_coefficients(&to_fano(&rho, &basis).unwrap(), &sc).unwrap();
            assert!(direct.a().max_abs_diff(fano.a()).unwrap() < 1e-9);
            assert!(direct.b().max_abs_diff(fano.b()).unwrap() < 1e-9);
            assert!(direct.c().max_abs_diff(fano.c()).unwrap() < 1e-9);
        }
    }

    #[test]
    fn coadjoint_tensor_vanishes_for_maximally_mixed() {
        let family = local_family(2, false).unwrap();
        let rho =
            DensityMatrix::new(ComplexMatrix::identity(4).scale(c(0.25, 0.))).unwrap();
        let m = coadjoint_tensor(&rho, &family).unwrap();
        assert!(m.max_abs() < 1e-14);
    }

    #[test]
    fn coadjoint_equals_pullback_for_pure_states() {
        let family = local_family(2, false).unwrap();
        for seed in 0..5 {
            let rho = density_from_pure(&random_pure_state(4, RngSeed(seed + 20)).unwrap());
            let k = pullback_tensor(&rho, &family).unwrap();
            let m = coadjoint_tensor(&rho, &family).unwrap();
            assert!(m.max_abs_diff(k.k()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn pure_state_moment_identity() {
        // Tr(rho R_j rho R_k) = Tr(rho R_j) Tr(rho R_k) for rank-1 rho
        let family = local_family(2, false).unwrap();
        let rho = density_from_pure(&random_pure_state(4, RngSeed(3)).unwrap());
        for j in 0..family.len() {
            for l in 0..family.len() {
                let lhs = trace(
                    &matmul(
                        &matmul(rho.matrix(), family.generator(j)).unwrap(),
                        &matmul(rho.matrix(), family.generator(l)).unwrap(),
                    )
                    .unwrap(),
                )
                .unwrap();
                let rhs = trace(&matmul(rho.matrix(), family.generator(j)).unwrap()).unwrap()
                    * trace(&matmul(rho.matrix(), family.generator(l)).unwrap()).unwrap();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn degeneracy_directions_across_the_strata() {
        let family = local_family(2, false).unwrap();
        let tol = Tolerance::default();
        // maximally mixed: everything commutes
        let mixed =
            DensityMatrix::new(ComplexMatrix::identity(4).scale(c(0.25, 0.))).unwrap();
        assert_eq!(
            degeneracy_directions(&mixed, &family, &tol).unwrap(),
            vec![0, 1, 2, 3, 4, 5]
        );
        // |00><00|: the two sigma_z lifts commute
        let product = density_from_pure(&schmidt_state(0.0).unwrap());
        let dirs = degeneracy_directions(&product, &family, &tol).unwrap();
        assert_eq!(dirs, vec![2, 5]);
        // the coadjoint rows along those directions vanish
        let m = coadjoint_tensor(&product, &family).unwrap();
        for &j in &dirs {
            for l in 0..6 {
                assert!(m[(j, l)].norm() <= 10.0 * tol.atol());
                assert!(m[(l, j)].norm() <= 10.0 * tol.atol());
            }
        }
        // generic angle: no single generator commutes with the state
        let generic = density_from_pure(&schmidt_state(0.3).unwrap());
        assert!(degeneracy_directions(&generic, &family, &tol)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn hermiticity_of_k_everywhere() {
        let family = local_family(2, false).unwrap();
        let tol = Tolerance::new(1e-12).unwrap();
        for seed in 0..10 {
            let rho = density_from_pure(&random_pure_state(4, RngSeed(seed + 50)).unwrap());
            let tensor = pullback_tensor(&rho, &family).unwrap();
            assert!(is_hermitian(tensor.k(), &tol).unwrap());
        }
    }
}
