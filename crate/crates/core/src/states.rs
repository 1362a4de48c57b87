//! Pure and density states of one and two qudits, Schmidt data, and the Fano
//! form of bipartite density matrices.
//!
//! Fano coefficients are stored in the expectation convention,
//! `n_a = Tr(rho sigma_a (x) 1)`, `m_b = Tr(rho 1 (x) sigma_b)`,
//! `t_ab = Tr(rho sigma_a (x) sigma_b)`, so that `C_ab = t_ab - n_a m_b` is
//! exactly the mixed block of the symmetric pull-back tensor for every N.

use num_complex::Complex64;

use crate::basis::GeneratorBasis;
use crate::linalg::{
    is_hermitian, kron, matmul, partial_trace, svd, trace, ComplexMatrix, RealMatrix, Tolerance,
};
use crate::{Error, Result};

/// Purity threshold: a state counts as pure when trace(rho^2) >= 1 - 1e-8.
pub const PURITY_GATE: f64 = 1e-8;

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dim: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Normalizes the amplitudes; the zero vector is rejected (states live on
    /// the punctured Hilbert space).
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Domain("state vector must be non-empty".into()));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Domain("state amplitudes must be finite".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        let norm = norm_sq.sqrt();
        Ok(Self {
            dim: amplitudes.len(),
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// Hermitian, unit-trace, positive semi-definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Full validation: Hermitian and unit trace within 1e-10, eigenvalues
    /// above -1e-9.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::hermitian_unit_trace(matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Checks Hermiticity and unit trace but not positivity. This is the
    /// constructor used by the linear Fano inverse, which may legitimately
    /// produce non-positive matrices from invalid coefficient data; call
    /// [`DensityMatrix::validate`] to check the positive cone.
    pub fn hermitian_unit_trace(matrix: ComplexMatrix) -> Result<Self> {
        let tol = Tolerance::default();
        if !is_hermitian(&matrix, &tol)? {
            return Err(Error::Contract(
                "density matrix is not Hermitian within 1e-10".into(),
            ));
        }
        let t = trace(&matrix)?;
        if (t - Complex64::new(1.0, 0.0)).norm() > tol.atol() {
            return Err(Error::Contract(format!(
                "density matrix trace is {t}, expected 1"
            )));
        }
        Ok(Self { matrix })
    }

    /// Positivity check: all eigenvalues >= -1e-9.
    pub fn validate(&self) -> Result<()> {
        let (vals, _) = crate::linalg::eigh(&self.matrix, &Tolerance::default())?;
        let min = vals.last().copied().unwrap_or(0.0);
        if min < -1e-9 {
            return Err(Error::Contract(format!(
                "density matrix has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// trace(rho^2).
    pub fn purity(&self) -> f64 {
        trace(&matmul(&self.matrix, &self.matrix).expect("square"))
            .expect("square")
            .re
    }

    pub fn is_pure(&self) -> bool {
        self.purity() >= 1.0 - PURITY_GATE
    }
}

/// The Schmidt family state cos(alpha0)|00> + sin(alpha0)|11>, the fiducial
/// state of the two-qubit orbit stratification.
pub fn schmidt_state(alpha0: f64) -> Result<PureState> {
    if !(0.0..=std::f64::consts::FRAC_PI_4).contains(&alpha0) {
        return Err(Error::Domain(format!(
            "Schmidt angle must lie in [0, pi/4], got {alpha0}"
        )));
    }
    PureState::new(vec![
        Complex64::new(alpha0.cos(), 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(alpha0.sin(), 0.0),
    ])
}

/// Applies a unitary to a state vector, |psi> -> U|psi>.
pub fn apply_unitary(u: &ComplexMatrix, psi: &PureState) -> Result<PureState> {
    if u.cols() != psi.dim() {
        return Err(Error::Shape(format!(
            "unitary is {}x{}, state has dimension {}",
            u.rows(),
            u.cols(),
            psi.dim()
        )));
    }
    let column = ComplexMatrix::from_fn(psi.dim(), 1, |i, _| psi.amplitudes()[i]);
    let image = matmul(u, &column)?;
    PureState::new((0..u.rows()).map(|i| image[(i, 0)]).collect())
}

/// Rank-1 projector |psi><psi|.
pub fn density_from_pure(psi: &PureState) -> DensityMatrix {
    let n = psi.dim();
    let matrix = ComplexMatrix::from_fn(n, n, |i, j| {
        psi.amplitudes()[i] * psi.amplitudes()[j].conj()
    });
    DensityMatrix { matrix }
}

/// Schmidt coefficients and vectors of a bipartite pure state.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    coefficients: Vec<f64>,
    left: ComplexMatrix,
    right: ComplexMatrix,
    alpha0: Option<f64>,
}

impl SchmidtData {
    /// Non-negative, descending; squares sum to 1.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Left Schmidt vectors as columns (d1 x r).
    pub fn left(&self) -> &ComplexMatrix {
        &self.left
    }

    /// Right Schmidt vectors as columns (d2 x r): the state reconstructs as
    /// sum_k c_k |left_k> (x) |right_k>.
    pub fn right(&self) -> &ComplexMatrix {
        &self.right
    }

    /// Schmidt angle atan2(c2, c1), populated for 2x2 inputs only.
    pub fn alpha0(&self) -> Option<f64> {
        self.alpha0
    }

    /// Number of coefficients above 1e-9.
    pub fn rank(&self) -> usize {
        self.coefficients.iter().filter(|&&x| x > 1e-9).count()
    }
}

/// SVD of the d1 x d2 coefficient matrix of `psi`.
pub fn schmidt_decompose(psi: &PureState, dims: (usize, usize)) -> Result<SchmidtData> {
    let (d1, d2) = dims;
    if d1 * d2 != psi.dim() {
        return Err(Error::Shape(format!(
            "dims ({d1},{d2}) do not factor state dimension {}",
            psi.dim()
        )));
    }
    let coeff = ComplexMatrix::from_fn(d1, d2, |i, j| psi.amplitudes()[i * d2 + j]);
    let (values, u, v) = svd(&coeff);
    // psi_(i1 i2) = sum_k U_(i1 k) c_k conj(V_(i2 k)): the right Schmidt
    // vectors are the conjugated columns of V.
    let right = v.conj();
    let alpha0 = if dims == (2, 2) {
        Some(values[1].atan2(values[0]))
    } else {
        None
    };
    Ok(SchmidtData {
        coefficients: values,
        left: u,
        right,
        alpha0,
    })
}

/// Coefficients (lambda0, n_a, m_b, t_ab) of a bipartite density matrix in
/// the expectation convention.
#[derive(Debug, Clone)]
pub struct FanoForm {
    n_local: usize,
    lambda0: f64,
    n: Vec<f64>,
    m: Vec<f64>,
    t: RealMatrix,
}

impl FanoForm {
    pub fn new(n_local: usize, lambda0: f64, n: Vec<f64>, m: Vec<f64>, t: RealMatrix) -> Self {
        Self {
            n_local,
            lambda0,
            n,
            m,
            t,
        }
    }

    pub fn n_local(&self) -> usize {
        self.n_local
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn n(&self) -> &[f64] {
        &self.n
    }

    pub fn m(&self) -> &[f64] {
        &self.m
    }

    pub fn t(&self) -> &RealMatrix {
        &self.t
    }
}

/// Expands `rho` over the sigma_a (x) sigma_b products.
pub fn to_fano(rho: &DensityMatrix, basis: &GeneratorBasis) -> Result<FanoForm> {
    let n = basis.n();
    if rho.dim() != n * n {
        return Err(Error::Shape(format!(
            "density matrix is {}-dimensional, basis expects {}",
            rho.dim(),
            n * n
        )));
    }
    let id = ComplexMatrix::identity(n);
    let su = basis.locals().len();
    let mut residue: f64 = 0.0;
    let mut expect = |op: &ComplexMatrix| -> Result<f64> {
        let v = trace(&matmul(rho.matrix(), op)?)?;
        residue = residue.max(v.im.abs());
        Ok(v.re)
    };

    let lambda0 = trace(rho.matrix())?.re;
    let mut nv = Vec::with_capacity(su);
    let mut mv = Vec::with_capacity(su);
    for sigma in basis.locals() {
        nv.push(expect(&kron(sigma, &id))?);
    }
    for sigma in basis.locals() {
        mv.push(expect(&kron(&id, sigma))?);
    }
    let mut t = RealMatrix::zeros(su, su);
    for (a, sa) in basis.locals().iter().enumerate() {
        for (b, sb) in basis.locals().iter().enumerate() {
            t[(a, b)] = expect(&kron(sa, sb))?;
        }
    }
    if residue > 1e-9 {
        return Err(Error::Contract(format!(
            "Fano coefficients have imaginary residue {residue:.3e}; input is not Hermitian"
        )));
    }
    Ok(FanoForm {
        n_local: n,
        lambda0,
        n: nv,
        m: mv,
        t,
    })
}

/// Linear inverse of [`to_fano`]:
///
/// ```text
/// rho = (1/N^2) [ lambda0 1(x)1 + (N/2) (n_a sigma_a(x)1 + m_b 1(x)sigma_b)
///                 + (N^2/4) t_ab sigma_a(x)sigma_b ]
/// ```
///
/// Positivity is not enforced; invalid coefficient data yields a Hermitian
/// unit-trace matrix that fails [`DensityMatrix::validate`].
pub fn from_fano(f: &FanoForm, basis: &GeneratorBasis) -> Result<DensityMatrix> {
    let n = basis.n();
    let su = basis.locals().len();
    if f.n_local != n || f.n.len() != su || f.m.len() != su || f.t.rows() != su || f.t.cols() != su
    {
        return Err(Error::Shape(format!(
            "Fano coefficient shapes do not match local dimension {n}"
        )));
    }
    let nn = (n * n) as f64;
    let id = ComplexMatrix::identity(n);
    let mut rho = ComplexMatrix::identity(n * n).scale(Complex64::new(f.lambda0 / nn, 0.0));
    let vec_scale = (n as f64 / 2.0) / nn;
    for (a, sigma) in basis.locals().iter().enumerate() {
        rho = rho.add(&kron(sigma, &id).scale(Complex64::new(f.n[a] * vec_scale, 0.0)))?;
        rho = rho.add(&kron(&id, sigma).scale(Complex64::new(f.m[a] * vec_scale, 0.0)))?;
    }
    let t_scale = (nn / 4.0) / nn;
    for (a, sa) in basis.locals().iter().enumerate() {
        for (b, sb) in basis.locals().iter().enumerate() {
            let w = f.t[(a, b)] * t_scale;
            if w != 0.0 {
                rho = rho.add(&kron(sa, sb).scale(Complex64::new(w, 0.0)))?;
            }
        }
    }
    DensityMatrix::hermitian_unit_trace(rho)
}

/// Pure-state separability criterion: separable iff t_ab - n_a m_b = 0.
/// Valid only for pure states; mixed inputs are rejected.
pub fn is_separable_pure(
    rho: &DensityMatrix,
    basis: &GeneratorBasis,
    tol: &Tolerance,
) -> Result<bool> {
    if !rho.is_pure() {
        return Err(Error::Domain(format!(
            "separability criterion requires a pure state; purity = {:.12}",
            rho.purity()
        )));
    }
    let f = to_fano(rho, basis)?;
    let mut dev: f64 = 0.0;
    for a in 0..f.n.len() {
        for b in 0..f.m.len() {
            dev = dev.max((f.t[(a, b)] - f.n[a] * f.m[b]).abs());
        }
    }
    Ok(dev <= tol.atol())
}

/// Partial trace wrapper returning a validated density matrix on the kept
/// subsystem.
pub fn reduced_state(
    rho: &DensityMatrix,
    dims: (usize, usize),
    keep: usize,
) -> Result<DensityMatrix> {
    let m = partial_trace(rho.matrix(), dims, keep)?;
    DensityMatrix::hermitian_unit_trace(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::gell_mann_basis;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pure_state_normalizes_and_rejects_zero() {
        let psi = PureState::new(vec![c(2., 0.), c(0., 0.)]).unwrap();
        assert!((psi.amplitudes()[0] - c(1., 0.)).norm() < 1e-15);
        assert!(matches!(
            PureState::new(vec![c(0., 0.), c(0., 0.)]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(PureState::new(vec![]), Err(Error::Domain(_))));
    }

    #[test]
    fn schmidt_state_endpoints() {
        let product = schmidt_state(0.0).unwrap();
        assert!((product.amplitudes()[0] - c(1., 0.)).norm() < 1e-15);
        assert!(product.amplitudes()[3].norm() < 1e-15);

        let bell = schmidt_state(FRAC_PI_4).unwrap();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((bell.amplitudes()[0] - c(inv_sqrt2, 0.)).norm() < 1e-12);
        assert!((bell.amplitudes()[3] - c(inv_sqrt2, 0.)).norm() < 1e-12);

        assert!(matches!(schmidt_state(-0.1), Err(Error::Domain(_))));
        assert!(matches!(schmidt_state(1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn density_from_pure_matches_explicit_projector() {
        let alpha = 0.3;
        let rho = density_from_pure(&schmidt_state(alpha).unwrap());
        let (cs, sn) = (alpha.cos(), alpha.sin());
        assert!((rho.matrix()[(0, 0)].re - cs * cs).abs() < 1e-14);
        assert!((rho.matrix()[(3, 3)].re - sn * sn).abs() < 1e-14);
        assert!((rho.matrix()[(0, 3)].re - cs * sn).abs() < 1e-14);
        assert!((rho.matrix()[(3, 0)].re - cs * sn).abs() < 1e-14);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        rho.validate().unwrap();
    }

    #[test]
    fn density_from_pure_is_projective() {
        let a = density_from_pure(&PureState::new(vec![c(2., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]).unwrap());
        let b = density_from_pure(&PureState::new(vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]).unwrap());
        assert!(a.matrix().max_abs_diff(b.matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn density_from_basis_vector() {
        let rho = density_from_pure(&PureState::new(vec![c(1., 0.), c(0., 0.)]).unwrap());
        let expected = ComplexMatrix::from_real(2, 2, &[1., 0., 0., 0.]).unwrap();
        assert!(rho.matrix().max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn density_matrix_rejects_bad_inputs() {
        // non-Hermitian
        let m = ComplexMatrix::from_entries(
            2,
            2,
            vec![c(0.5, 0.), c(0.1, 0.1), c(0.3, 0.1), c(0.5, 0.)],
        )
        .unwrap();
        assert!(matches!(DensityMatrix::new(m), Err(Error::Contract(_))));
        // wrong trace
        let m = ComplexMatrix::from_real(2, 2, &[0.9, 0., 0., 0.9]).unwrap();
        assert!(matches!(DensityMatrix::new(m), Err(Error::Contract(_))));
        // negative eigenvalue passes the lenient path, fails validate
        let m = ComplexMatrix::from_real(2, 2, &[1.5, 0., 0., -0.5]).unwrap();
        let rho = DensityMatrix::hermitian_unit_trace(m).unwrap();
        assert!(rho.validate().is_err());
    }

    #[test]
    fn schmidt_decompose_product_and_bell() {
        let product = schmidt_state(0.0).unwrap();
        let sd = schmidt_decompose(&product, (2, 2)).unwrap();
        assert_eq!(sd.rank(), 1);
        assert!((sd.coefficients()[0] - 1.0).abs() < 1e-12);
        assert!((sd.alpha0().unwrap() - 0.0).abs() < 1e-12);

        let bell = schmidt_state(FRAC_PI_4).unwrap();
        let sd = schmidt_decompose(&bell, (2, 2)).unwrap();
        assert_eq!(sd.rank(), 2);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((sd.coefficients()[0] - inv_sqrt2).abs() < 1e-12);
        assert!((sd.coefficients()[1] - inv_sqrt2).abs() < 1e-12);
        assert!((sd.alpha0().unwrap() - FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn schmidt_reconstructs_state() {
        let psi = PureState::new(vec![
            c(0.3, 0.1),
            c(-0.2, 0.4),
            c(0.05, -0.6),
            c(0.33, 0.2),
        ])
        .unwrap();
        let sd = schmidt_decompose(&psi, (2, 2)).unwrap();
        let mut rebuilt = [c(0., 0.); 4];
        for k in 0..sd.coefficients().len() {
            for i1 in 0..2 {
                for i2 in 0..2 {
                    rebuilt[i1 * 2 + i2] +=
                        sd.coefficients()[k] * sd.left()[(i1, k)] * sd.right()[(i2, k)];
                }
            }
        }
        for (a, b) in rebuilt.iter().zip(psi.amplitudes()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn schmidt_rejects_bad_dims() {
        let psi = schmidt_state(0.1).unwrap();
        assert!(matches!(
            schmidt_decompose(&psi, (2, 3)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn fano_of_maximally_mixed() {
        let basis = gell_mann_basis(2).unwrap();
        let rho =
            DensityMatrix::new(ComplexMatrix::identity(4).scale(c(0.25, 0.))).unwrap();
        let f = to_fano(&rho, &basis).unwrap();
        assert!((f.lambda0() - 1.0).abs() < 1e-12);
        assert!(f.n().iter().all(|x| x.abs() < 1e-12));
        assert!(f.m().iter().all(|x| x.abs() < 1e-12));
        assert!(f.t().max_abs() < 1e-12);
    }

    #[test]
    fn fano_of_schmidt_family() {
        let basis = gell_mann_basis(2).unwrap();
        for alpha in [0.0, 0.2, FRAC_PI_4] {
            let rho = density_from_pure(&schmidt_state(alpha).unwrap());
            let f = to_fano(&rho, &basis).unwrap();
            let cos2a = (2.0 * alpha).cos();
            for (i, expected) in [0.0, 0.0, cos2a].iter().enumerate() {
                assert!((f.n()[i] - expected).abs() < 1e-12);
                assert!((f.m()[i] - expected).abs() < 1e-12);
            }
        }
        // Bell state: t = diag(1, -1, 1)
        let rho = density_from_pure(&schmidt_state(FRAC_PI_4).unwrap());
        let f = to_fano(&rho, &basis).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let expected = match (a, b) {
                    (0, 0) | (2, 2) => 1.0,
                    (1, 1) => -1.0,
                    _ => 0.0,
                };
                assert!((f.t()[(a, b)] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fano_round_trip_on_fiducial_state() {
        let basis = gell_mann_basis(2).unwrap();
        let rho = density_from_pure(&schmidt_state(0.3).unwrap());
        let f = to_fano(&rho, &basis).unwrap();
        let back = from_fano(&f, &basis).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn from_fano_of_trivial_coefficients_is_maximally_mixed() {
        let basis = gell_mann_basis(2).unwrap();
        let f = FanoForm::new(2, 1.0, vec![0.; 3], vec![0.; 3], RealMatrix::zeros(3, 3));
        let rho = from_fano(&f, &basis).unwrap();
        let expected = ComplexMatrix::identity(4).scale(c(0.25, 0.));
        assert!(rho.matrix().max_abs_diff(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn from_fano_rejects_shape_mismatch() {
        let basis = gell_mann_basis(2).unwrap();
        let f = FanoForm::new(3, 1.0, vec![0.; 8], vec![0.; 8], RealMatrix::zeros(8, 8));
        assert!(matches!(from_fano(&f, &basis), Err(Error::Shape(_))));
    }

    #[test]
    fn separability_along_the_schmidt_family() {
        let basis = gell_mann_basis(2).unwrap();
        let tol = Tolerance::default();
        let sep = density_from_pure(&schmidt_state(0.0).unwrap());
        assert!(is_separable_pure(&sep, &basis, &tol).unwrap());
        let bell = density_from_pure(&schmidt_state(FRAC_PI_4).unwrap());
        assert!(!is_separable_pure(&bell, &basis, &tol).unwrap());
    }

    #[test]
    fn separability_rejects_mixed_states() {
        let basis = gell_mann_basis(2).unwrap();
        let rho =
            DensityMatrix::new(ComplexMatrix::identity(4).scale(c(0.25, 0.))).unwrap();
        assert!(matches!(
            is_separable_pure(&rho, &basis, &Tolerance::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn reduced_states_of_schmidt_family() {
        // Tr_2 at angle alpha -> diag(cos^2, sin^2); at pi/4 -> I/2
        let alpha: f64 = 0.3;
        let rho = density_from_pure(&schmidt_state(alpha).unwrap());
        let r1 = reduced_state(&rho, (2, 2), 1).unwrap();
        assert!((r1.matrix()[(0, 0)].re - alpha.cos().powi(2)).abs() < 1e-12);
        assert!((r1.matrix()[(1, 1)].re - alpha.sin().powi(2)).abs() < 1e-12);
        assert!(r1.matrix()[(0, 1)].norm() < 1e-12);

        let bell = density_from_pure(&schmidt_state(FRAC_PI_4).unwrap());
        let r1 = reduced_state(&bell, (2, 2), 1).unwrap();
        let half_id = ComplexMatrix::identity(2).scale(c(0.5, 0.));
        assert!(r1.matrix().max_abs_diff(&half_id).unwrap() < 1e-12);
    }
}
