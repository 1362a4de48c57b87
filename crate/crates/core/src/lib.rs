//! Classical tensors on local-unitary orbits of bipartite quantum states.
//!
//! The central object is the Hermitian coefficient matrix
//!
//! ```text
//! K_jk = Tr(rho0 R_j R_k) - Tr(rho0 R_j) Tr(rho0 R_k)
//! ```
//!
//! obtained by pulling the Hilbert-space Hermitian tensor back onto the orbit
//! of a fiducial state `rho0` under the local unitary group U(N) x U(N),
//! with `R_j` running over the lifted su(N) generators `sigma_a (x) 1` and
//! `1 (x) sigma_a`. Its real symmetric part is a Riemannian metric on the
//! orbit, its imaginary antisymmetric part a pre-symplectic two-form, and the
//! block structure of the symmetric part separates local from non-local
//! correlations: the mixed block `C_ab = t_ab - n_a m_b` vanishes exactly on
//! pure product states.
//!
//! Modules:
//!
//! - [`linalg`]: dense complex matrices, Kronecker products, partial traces,
//!   Hermitian eigendecomposition and SVD.
//! - [`basis`]: generalized Gell-Mann bases of su(N), structure constants,
//!   and the bipartite local generator family.
//! - [`states`]: pure states, density matrices, Schmidt data, Fano form.
//! - [`pullback`]: the tensor `K`, its symmetric/antisymmetric split, the
//!   A/B/C block decomposition, and the coadjoint-orbit tensor.
//! - [`measures`]: entanglement quantifiers built on the block structure.
//! - [`orbits`]: Haar sampling, local-unitary orbit transport, and the
//!   numerical orbit-dimension estimator.

#![forbid(unsafe_code)]

pub mod basis;
pub mod linalg;
pub mod measures;
pub mod orbits;
pub mod pullback;
pub mod states;

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or vector dimensions do not conform.
    #[error("shape error: {0}")]
    Shape(String),

    /// Input lies outside the operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An input violated a documented contract (e.g. a non-Hermitian matrix
    /// where a Hermitian one is required).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Two independent evaluation routes of the same quantity disagreed.
    #[error("internal consistency error: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
