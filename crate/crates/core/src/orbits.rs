//! Haar-random sampling and local-unitary orbit transport.
//!
//! All sampling is seeded: a fixed [`RngSeed`] reproduces the exact sample
//! stream, and batch draws partition the generator's stream space (one stream
//! per work item) so results do not depend on evaluation order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::basis::LocalGeneratorFamily;
use crate::linalg::{eigh, kron, matmul, ComplexMatrix, Tolerance};
use crate::pullback::pullback_tensor;
use crate::states::{DensityMatrix, PureState};
use crate::{Error, Result};

/// Numerical rank threshold for orbit dimensions: eigenvalues of the Gram
/// matrix above this absolute value count. The two-qubit spectra have gaps of
/// order sin^2(2 alpha0), so this is safe away from the stratum boundaries.
pub const RANK_ATOL: f64 = 1e-8;

/// Reproducibility handle: identical seeds yield identical sample streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSeed(pub u64);

fn rng_for(seed: RngSeed, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    rng.set_stream(stream);
    rng
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal) * inv_sqrt2,
            rng.sample::<f64, _>(StandardNormal) * inv_sqrt2,
        )
    })
}

fn haar_unitary_from(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let qr = DMatrixExt::to_nalgebra(&g).qr();
    let q = qr.q();
    let r = qr.r();
    // Fix the residual diagonal phase gauge so the distribution is Haar.
    let mut u = ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)]);
    for j in 0..n {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            let z = u[(i, j)] * phase;
            u[(i, j)] = z;
        }
    }
    u
}

// Local bridge; keeps the nalgebra dependency out of this module's surface.
struct DMatrixExt;

impl DMatrixExt {
    fn to_nalgebra(m: &ComplexMatrix) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
    }
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the R
/// diagonal phases absorbed into Q.
pub fn haar_unitary(n: usize, seed: RngSeed) -> Result<ComplexMatrix> {
    if n < 1 {
        return Err(Error::Domain("unitary dimension must be >= 1".into()));
    }
    Ok(haar_unitary_from(&mut rng_for(seed, 0), n))
}

/// Haar-random pure state: a normalized complex Gaussian vector.
pub fn random_pure_state(dim: usize, seed: RngSeed) -> Result<PureState> {
    if dim < 1 {
        return Err(Error::Domain("state dimension must be >= 1".into()));
    }
    let g = gaussian_matrix(&mut rng_for(seed, 0), dim, 1);
    PureState::new((0..dim).map(|i| g[(i, 0)]).collect())
}

/// A fiducial state together with local-unitary transports of it.
#[derive(Debug, Clone)]
pub struct OrbitSample {
    base: DensityMatrix,
    images: Vec<DensityMatrix>,
    unitaries: Vec<ComplexMatrix>,
}

impl OrbitSample {
    pub fn base(&self) -> &DensityMatrix {
        &self.base
    }

    pub fn images(&self) -> &[DensityMatrix] {
        &self.images
    }

    /// The U1 (x) U2 used for each image.
    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }
}

/// Draws `count` images (U1 (x) U2) rho0 (U1 (x) U2)^dagger with independent
/// Haar-distributed U1, U2. Each image uses its own generator stream, so the
/// sample at index i never depends on how many other images were drawn.
pub fn local_orbit_samples(
    rho0: &DensityMatrix,
    count: usize,
    seed: RngSeed,
) -> Result<OrbitSample> {
    let dim = rho0.dim();
    let n = (dim as f64).sqrt().round() as usize;
    if n * n != dim || n < 2 {
        return Err(Error::Domain(format!(
            "orbit sampling requires two equal local dimensions; total dimension {dim} is not a square of N >= 2"
        )));
    }
    let mut images = Vec::with_capacity(count);
    let mut unitaries = Vec::with_capacity(count);
    for item in 0..count {
        let mut rng = rng_for(seed, item as u64);
        let u1 = haar_unitary_from(&mut rng, n);
        let u2 = haar_unitary_from(&mut rng, n);
        let u = kron(&u1, &u2);
        let image = matmul(&matmul(&u, rho0.matrix())?, &u.dagger())?;
        images.push(DensityMatrix::hermitian_unit_trace(image)?);
        unitaries.push(u);
    }
    Ok(OrbitSample {
        base: rho0.clone(),
        images,
        unitaries,
    })
}

/// Dimension of the local-unitary orbit through a pure state: the rank of
/// the Gram matrix Re K over the non-identity generator directions,
/// counting eigenvalues above the absolute threshold `tol.atol()`.
pub fn orbit_dimension(
    rho0: &DensityMatrix,
    family: &LocalGeneratorFamily,
    tol: &Tolerance,
) -> Result<usize> {
    if !rho0.is_pure() {
        return Err(Error::Domain(format!(
            "orbit dimension is defined here for pure states; purity = {:.12}",
            rho0.purity()
        )));
    }
    let tensor = pullback_tensor(rho0, family)?;
    let sym = tensor.k().re();
    // Restrict to the su(N) directions; identity rows are flat by
    // construction and must not count toward the rank.
    let keep: Vec<usize> = (0..family.len())
        .filter(|&j| !family.is_identity(j))
        .collect();
    let gram = ComplexMatrix::from_fn(keep.len(), keep.len(), |i, j| {
        Complex64::new(sym[(keep[i], keep[j])], 0.0)
    });
    let (vals, _) = eigh(&gram, &Tolerance::default())?;
    Ok(vals.iter().filter(|&&v| v > tol.atol()).count())
}
