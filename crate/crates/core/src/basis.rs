//! Generalized Gell-Mann bases of su(N) and the bipartite local generator
//! family.
//!
//! The local basis is normalized so that `trace(sigma_a sigma_b) = 2
//! delta_ab`, which for N = 2 reproduces the standard Pauli matrices exactly.
//! Commutator brackets follow the halved conventions
//!
//! ```text
//! [A, B]+ := (AB + BA) / 2        [A, B]- := (AB - BA) / 2i
//! ```
//!
//! so that `[sigma_a, sigma_b]- = eps_abc sigma_c` and
//! `[sigma_a, sigma_b]+ = (2/N) delta_ab sigma_0 + d_abc sigma_c`. Raw
//! commutators never cross this module's boundary.

use num_complex::Complex64;

use crate::linalg::{kron, matmul, trace, ComplexMatrix};
use crate::{Error, Result};

/// Which tensor slot a lifted generator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

impl Subsystem {
    pub fn index(&self) -> usize {
        match self {
            Subsystem::First => 1,
            Subsystem::Second => 2,
        }
    }
}

/// Ordered family of Hermitian su(N) generators with the fixed normalization
/// `trace(sigma_a sigma_b) = 2 delta_ab`.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    n: usize,
    locals: Vec<ComplexMatrix>,
    include_identity: bool,
    labels: Vec<String>,
}

impl GeneratorBasis {
    /// Local Hilbert-space dimension N.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The N^2 - 1 traceless generators, identity excluded.
    pub fn locals(&self) -> &[ComplexMatrix] {
        &self.locals
    }

    pub fn include_identity(&self) -> bool {
        self.include_identity
    }

    /// Index labels standing in for the left-invariant one-forms theta^j.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Same basis with sigma_0 = 1 appended to the labeled family
    /// (U(N) rather than SU(N) directions).
    pub fn with_identity(mut self) -> Self {
        if !self.include_identity {
            self.include_identity = true;
            self.labels.push("s0".into());
        }
        self
    }
}

/// Builds the generalized Gell-Mann family for local dimension `n`:
/// symmetric off-diagonal pairs in lexicographic order, then antisymmetric
/// pairs, then diagonal members. For n = 2 this is exactly
/// (sigma_x, sigma_y, sigma_z).
pub fn gell_mann_basis(n: usize) -> Result<GeneratorBasis> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "generator basis requires local dimension >= 2, got {n}"
        )));
    }
    let mut locals = Vec::with_capacity(n * n - 1);
    // E_jk + E_kj
    for j in 0..n {
        for k in (j + 1)..n {
            let mut m = ComplexMatrix::zeros(n, n);
            m[(j, k)] = Complex64::new(1.0, 0.0);
            m[(k, j)] = Complex64::new(1.0, 0.0);
            locals.push(m);
        }
    }
    // -i (E_jk - E_kj)
    for j in 0..n {
        for k in (j + 1)..n {
            let mut m = ComplexMatrix::zeros(n, n);
            m[(j, k)] = Complex64::new(0.0, -1.0);
            m[(k, j)] = Complex64::new(0.0, 1.0);
            locals.push(m);
        }
    }
    // sqrt(2 / (l (l+1))) (E_00 + ... + E_(l-1)(l-1) - l E_ll)
    for l in 1..n {
        let scale = (2.0 / (l as f64 * (l as f64 + 1.0))).sqrt();
        let mut m = ComplexMatrix::zeros(n, n);
        for j in 0..l {
            m[(j, j)] = Complex64::new(scale, 0.0);
        }
        m[(l, l)] = Complex64::new(-scale * l as f64, 0.0);
        locals.push(m);
    }
    let labels = (1..n * n).map(|a| format!("s{a}")).collect();
    Ok(GeneratorBasis {
        n,
        locals,
        include_identity: false,
        labels,
    })
}

/// Structure constants of the basis in the halved bracket conventions:
/// eps is totally antisymmetric in (a, b), d symmetric, and
/// `[sigma_a, sigma_b]+ = delta_coeff * delta_ab * sigma_0 + d_abc sigma_c`.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    dim: usize,
    eps: Vec<f64>,
    d: Vec<f64>,
    delta_coeff: f64,
}

impl StructureConstants {
    /// Number of su(N) directions, N^2 - 1.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eps(&self, a: usize, b: usize, c: usize) -> f64 {
        self.eps[(a * self.dim + b) * self.dim + c]
    }

    pub fn d(&self, a: usize, b: usize, c: usize) -> f64 {
        self.d[(a * self.dim + b) * self.dim + c]
    }

    /// The 2/N coefficient of `delta_ab sigma_0` in the anticommutator.
    pub fn delta_coeff(&self) -> f64 {
        self.delta_coeff
    }
}

/// Halved commutator `[a, b]- = (ab - ba) / 2i`.
fn commutator_halved(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let ab = matmul(a, b)?;
    let ba = matmul(b, a)?;
    Ok(ab.sub(&ba)?.scale(Complex64::new(0.0, -0.5)))
}

/// Halved anticommutator `[a, b]+ = (ab + ba) / 2`.
fn anticommutator_halved(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let ab = matmul(a, b)?;
    let ba = matmul(b, a)?;
    Ok(ab.add(&ba)?.scale(Complex64::new(0.5, 0.0)))
}

/// Computes eps_abc and d_abc by tracing the (anti)commutators against the
/// basis, then verifies the defining reconstruction identities.
pub fn structure_constants(basis: &GeneratorBasis) -> Result<StructureConstants> {
    let dim = basis.locals().len();
    let n = basis.n() as f64;
    let mut eps = vec![0.0; dim * dim * dim];
    let mut d = vec![0.0; dim * dim * dim];
    let mut imag_residue: f64 = 0.0;

    for a in 0..dim {
        for b in 0..dim {
            let comm = commutator_halved(&basis.locals()[a], &basis.locals()[b])?;
            let anti = anticommutator_halved(&basis.locals()[a], &basis.locals()[b])?;
            for c in 0..dim {
                // trace orthogonality: X = x_c sigma_c implies x_c = trace(X sigma_c) / 2
                let e = trace(&matmul(&comm, &basis.locals()[c])?)? * 0.5;
                let s = trace(&matmul(&anti, &basis.locals()[c])?)? * 0.5;
                imag_residue = imag_residue.max(e.im.abs()).max(s.im.abs());
                eps[(a * dim + b) * dim + c] = e.re;
                d[(a * dim + b) * dim + c] = s.re;
            }
        }
    }
    if imag_residue > 1e-10 {
        return Err(Error::Contract(format!(
            "structure constants have imaginary residue {imag_residue:.3e}"
        )));
    }

    let sc = StructureConstants {
        dim,
        eps,
        d,
        delta_coeff: 2.0 / n,
    };

    // Reconstruction check: the brackets must expand back over the basis.
    let id = ComplexMatrix::identity(basis.n());
    let mut residual: f64 = 0.0;
    for a in 0..dim {
        for b in 0..dim {
            let comm = commutator_halved(&basis.locals()[a], &basis.locals()[b])?;
            let anti = anticommutator_halved(&basis.locals()[a], &basis.locals()[b])?;
            let mut comm_rec = ComplexMatrix::zeros(basis.n(), basis.n());
            let mut anti_rec = if a == b {
                id.scale(Complex64::new(sc.delta_coeff, 0.0))
            } else {
                ComplexMatrix::zeros(basis.n(), basis.n())
            };
            for c in 0..dim {
                comm_rec = comm_rec
                    .add(&basis.locals()[c].scale(Complex64::new(sc.eps(a, b, c), 0.0)))?;
                anti_rec = anti_rec
                    .add(&basis.locals()[c].scale(Complex64::new(sc.d(a, b, c), 0.0)))?;
            }
            residual = residual
                .max(comm.max_abs_diff(&comm_rec)?)
                .max(anti.max_abs_diff(&anti_rec)?);
        }
    }
    if residual > 1e-9 {
        return Err(Error::Inconsistency(format!(
            "structure constant reconstruction residual {residual:.3e}"
        )));
    }
    Ok(sc)
}

/// The lifted bipartite generators R(e_j): first all sigma_a (x) 1, then all
/// 1 (x) sigma_a, with the identity directions (when requested) appended at
/// the end of each half's block.
#[derive(Debug, Clone)]
pub struct LocalGeneratorFamily {
    n: usize,
    generators: Vec<ComplexMatrix>,
    subsystem_of: Vec<Subsystem>,
    local_index_of: Vec<Option<usize>>,
    labels: Vec<String>,
    include_identity: bool,
}

impl LocalGeneratorFamily {
    /// Local dimension N.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total Hilbert-space dimension N^2.
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    /// Number of generators: 2(N^2 - 1), or 2 N^2 with identities.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn generator(&self, j: usize) -> &ComplexMatrix {
        &self.generators[j]
    }

    pub fn subsystem_of(&self, j: usize) -> Subsystem {
        self.subsystem_of[j]
    }

    /// 0-based index into the local basis, or None for an identity direction.
    pub fn local_index_of(&self, j: usize) -> Option<usize> {
        self.local_index_of[j]
    }

    pub fn is_identity(&self, j: usize) -> bool {
        self.local_index_of[j].is_none()
    }

    pub fn include_identity(&self) -> bool {
        self.include_identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// True when j and k act on different subsystems.
    pub fn is_mixed_pair(&self, j: usize, k: usize) -> bool {
        self.subsystem_of[j] != self.subsystem_of[k]
    }
}

/// Lifts the local basis to the bipartite family
/// (sigma_1 (x) 1, ..., 1 (x) sigma_1, ...).
pub fn local_family(n: usize, include_identity: bool) -> Result<LocalGeneratorFamily> {
    let basis = gell_mann_basis(n)?;
    let id = ComplexMatrix::identity(n);
    let su = basis.locals().len();
    let half = su + usize::from(include_identity);

    let mut generators = Vec::with_capacity(2 * half);
    let mut subsystem_of = Vec::with_capacity(2 * half);
    let mut local_index_of = Vec::with_capacity(2 * half);
    let mut labels = Vec::with_capacity(2 * half);

    for (side, tag) in [(Subsystem::First, "1"), (Subsystem::Second, "2")] {
        for (a, sigma) in basis.locals().iter().enumerate() {
            generators.push(match side {
                Subsystem::First => kron(sigma, &id),
                Subsystem::Second => kron(&id, sigma),
            });
            subsystem_of.push(side);
            local_index_of.push(Some(a));
            labels.push(format!("{tag}:s{}", a + 1));
        }
        if include_identity {
            generators.push(ComplexMatrix::identity(n * n));
            subsystem_of.push(side);
            local_index_of.push(None);
            labels.push(format!("{tag}:s0"));
        }
    }

    Ok(LocalGeneratorFamily {
        n,
        generators,
        subsystem_of,
        local_index_of,
        labels,
        include_identity,
    })
}
