//! Dense complex linear-algebra kernel: eigendecomposition, SVD,
//! pseudoinverse, matrix exponential, Schatten norms.
//!
//! Everything here is a pure function of its inputs and deterministic for
//! identical input; all randomness used by callers flows from explicit
//! 64-bit seeds.

pub mod eig;
pub mod expm;
pub mod matrix;
pub mod svd;

pub use eig::{eig, eigenvalues, schur, EigenDecomp, Schur, EIG_DIM_CAP};
pub use expm::expm;
pub use matrix::{
    random_vector, unit_vector, vec_add, vec_dot, vec_norm, vec_normalize, vec_pair, vec_scale,
    vec_sub, CMatrix, Lu, C64,
};
pub use svd::{pinv, schatten_norm, svd, SvdDecomp};

/// Operator norm (largest singular value).
pub fn operator_norm(m: &CMatrix) -> crate::error::Result<f64> {
    Ok(svd(m)?.singular_values.first().copied().unwrap_or(0.0))
}
