//! Dense complex matrix kernel.
//!
//! Vectorization stacks columns: entry `(i, j)` of an `n × n` matrix lands at
//! index `i + j n`, and `vec(X A Y) = (Yᵀ ⊗ X) vec(A)`.

mod hermitian;
mod matrix;
mod random;

pub use hermitian::{HermitianForm, EIG_RESIDUAL_TOL};
pub use matrix::{commutator, fro_norm_sq, hs_inner, kron, q_commutator, unvec, vec, ComplexMatrix};
pub use random::{complex_gaussian, random_ginibre, random_normal_matrix, random_unitary};

pub(crate) use matrix::check_same_dim;

/// Largest eigenvalue of `h` with a unit eigenvector.
pub fn top_eigpair(h: &HermitianForm) -> crate::Result<(f64, Vec<num_complex::Complex64>)> {
    h.top_eigpair()
}
