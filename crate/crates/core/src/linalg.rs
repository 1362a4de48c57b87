//! Minimal dense complex linear algebra.
//!
//! Everything in this crate operates on matrices no larger than 16x16 (two
//! qudits with N <= 4), so the storage is a plain row-major `Vec` and the
//! elementary products are written as explicit loops. Hermitian
//! eigendecomposition and SVD are delegated to `nalgebra`; the wrappers here
//! fix the ordering conventions (descending spectra) and enforce the
//! tolerance-based contracts.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Default absolute tolerance. All quantities handled by this crate are O(1),
/// so double precision leaves several digits of headroom above this.
pub const DEFAULT_ATOL: f64 = 1e-10;

/// Absolute comparison threshold used by the tolerance-based predicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    atol: f64,
}

impl Tolerance {
    pub fn new(atol: f64) -> Result<Self> {
        if atol <= 0.0 || !atol.is_finite() {
            return Err(Error::Domain(format!(
                "tolerance must be a positive finite number, got {atol}"
            )));
        }
        Ok(Self { atol })
    }

    pub fn atol(&self) -> f64 {
        self.atol
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { atol: DEFAULT_ATOL }
    }
}

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting length mismatches
    /// and non-finite values.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "entry count {} does not match {}x{}",
                entries.len(),
                rows,
                cols
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Convenience constructor from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_entries(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference, `max |a_jk - b_jk|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other, "max_abs_diff")?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Entrywise real part.
    pub fn re(&self) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].re)
    }

    /// Entrywise imaginary part.
    pub fn im(&self) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].im)
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }

    fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Dense real matrix in row-major order. Used for the symmetric and
/// antisymmetric parts of the pull-back tensor, the A/B/C blocks, and other
/// real-valued coefficient arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "sub: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)] - other[(i, j)]
        }))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Sum of squared entries, `tr(M^T M)`.
    pub fn frobenius_sq(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum()
    }

    /// Promotes to a complex matrix with zero imaginary part.
    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            Complex64::new(self[(i, j)], 0.0)
        })
    }
}

impl std::ops::Index<(usize, usize)> for RealMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Standard matrix product.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(Error::Shape(format!(
            "matmul: {}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = ComplexMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a[(i, k)];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..b.cols {
                out[(i, j)] += aik * b[(k, j)];
            }
        }
    }
    Ok(out)
}

/// Kronecker product. The left factor indexes the coarse blocks, i.e. the
/// left tensor slot is subsystem 1.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        let (ia, ib) = (i / b.rows, i % b.rows);
        let (ja, jb) = (j / b.cols, j % b.cols);
        a[(ia, ja)] * b[(ib, jb)]
    })
}

/// Sum of diagonal entries.
pub fn trace(a: &ComplexMatrix) -> Result<Complex64> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "trace: matrix is {}x{}, not square",
            a.rows, a.cols
        )));
    }
    Ok((0..a.rows).map(|i| a[(i, i)]).sum())
}

/// Reduced matrix on the kept subsystem, by explicit index contraction over
/// the traced slot. `dims = (d1, d2)` with subsystem 1 the left Kronecker
/// slot; `keep` is 1 or 2.
pub fn partial_trace(
    rho: &ComplexMatrix,
    dims: (usize, usize),
    keep: usize,
) -> Result<ComplexMatrix> {
    let (d1, d2) = dims;
    let total = d1 * d2;
    if rho.rows != total || rho.cols != total {
        return Err(Error::Shape(format!(
            "partial_trace: matrix is {}x{}, dims ({d1},{d2}) require {total}x{total}",
            rho.rows, rho.cols
        )));
    }
    match keep {
        1 => {
            let mut out = ComplexMatrix::zeros(d1, d1);
            for i in 0..d1 {
                for j in 0..d1 {
                    let mut s = Complex64::new(0.0, 0.0);
                    for k in 0..d2 {
                        s += rho[(i * d2 + k, j * d2 + k)];
                    }
                    out[(i, j)] = s;
                }
            }
            Ok(out)
        }
        2 => {
            let mut out = ComplexMatrix::zeros(d2, d2);
            for i in 0..d2 {
                for j in 0..d2 {
                    let mut s = Complex64::new(0.0, 0.0);
                    for k in 0..d1 {
                        s += rho[(k * d2 + i, k * d2 + j)];
                    }
                    out[(i, j)] = s;
                }
            }
            Ok(out)
        }
        other => Err(Error::Domain(format!(
            "partial_trace: keep must be 1 or 2, got {other}"
        ))),
    }
}

/// True iff `max |a_jk - conj(a_kj)| <= tol`.
pub fn is_hermitian(a: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "is_hermitian: matrix is {}x{}, not square",
            a.rows, a.cols
        )));
    }
    let mut dev: f64 = 0.0;
    for i in 0..a.rows {
        for j in i..a.cols {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    Ok(dev <= tol.atol())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns real eigenvalues sorted descending (ties keep input order) and the
/// matching orthonormal eigenvectors as columns. Rejects inputs that are not
/// Hermitian within `tol`.
pub fn eigh(a: &ComplexMatrix, tol: &Tolerance) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !is_hermitian(a, tol)? {
        return Err(Error::Contract(
            "eigh: input is not Hermitian within tolerance".into(),
        ));
    }
    let se = a.to_nalgebra().symmetric_eigen();
    let n = a.rows;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[j].partial_cmp(&se.eigenvalues[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Singular value decomposition `a = U S V^dagger` with singular values
/// sorted descending.
pub fn svd(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix, ComplexMatrix) {
    let decomp = a.to_nalgebra().svd(true, true);
    let values: Vec<f64> = decomp.singular_values.iter().copied().collect();
    let u = ComplexMatrix::from_nalgebra(&decomp.u.expect("svd requested U"));
    let v = ComplexMatrix::from_nalgebra(&decomp.v_t.expect("svd requested V^T").adjoint());
    (values, u, v)
}
