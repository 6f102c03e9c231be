//! Hilbert–Schmidt machinery: the trace inner product, hyponormality
//! testing, and the self-commutator identity for lifted derivations.
//!
//! Unlike the dual-pairing convention used elsewhere, everything here is
//! genuinely hermitian: `<S, T> = tr(T* S)`.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::elementary::ElementaryOp;
use crate::error::{OpdynError, Result};
use crate::numlin::{eigenvalues, vec_norm, CMatrix};

/// `<S, T> = tr(T* S)`.
pub fn hs_inner(s: &CMatrix, t: &CMatrix) -> Result<C64> {
    if s.rows() != t.rows() || s.cols() != t.cols() {
        return Err(OpdynError::Dimension(
            "Hilbert-Schmidt inner product needs equal shapes".into(),
        ));
    }
    Ok(t.conj_transpose().matmul(s).trace())
}

/// Outcome of the hyponormality test `M*M - MM* >= 0`.
#[derive(Debug, Clone)]
pub struct HyponormalReport {
    /// Smallest eigenvalue of the self-commutator (real part; imaginary
    /// parts of a hermitian matrix's spectrum are rounding noise).
    pub min_eigenvalue: f64,
    pub hyponormal: bool,
    /// Worst violation of `||Mx|| >= ||M*x||` over the seeded vector
    /// sweep, as `||M*x||^2 - ||Mx||^2` (positive = violation).
    pub norm_check_violation: f64,
}

/// Test `M*M - MM* >= -tol` by its smallest eigenvalue and cross-check
/// the norm characterisation `||Mx|| >= ||M*x||` on 50 seeded vectors.
pub fn hyponormal_check(m: &CMatrix, tol: f64) -> Result<HyponormalReport> {
    let d = m.require_square()?;
    let mstar = m.conj_transpose();
    let sc = mstar.matmul(m).sub(&m.matmul(&mstar));
    let evs = eigenvalues(&sc)?;
    let min_eigenvalue = evs
        .iter()
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);

    let mut rng = ChaCha8Rng::seed_from_u64(0x4853);
    let mut violation = f64::NEG_INFINITY;
    for _ in 0..50 {
        let x = crate::numlin::random_vector(d, &mut rng);
        let fwd = vec_norm(&m.matvec(&x));
        let adj = vec_norm(&mstar.matvec(&x));
        violation = violation.max(adj * adj - fwd * fwd);
    }
    Ok(HyponormalReport {
        min_eigenvalue,
        hyponormal: min_eigenvalue >= -tol,
        norm_check_violation: violation,
    })
}

/// Both sides of the self-commutator identity for a lifted derivation:
/// with `L = lift(tau_{A,B})`, the hermitian self-commutator `L*L - LL*`
/// equals the lift of `L_{A*A - AA*} + R_{BB* - B*B}`.
#[derive(Debug, Clone)]
pub struct SelfCommutator {
    pub lhs: CMatrix,
    pub rhs: CMatrix,
    /// `||lhs - rhs||_F` scaled by `(1 + ||A|| + ||B||)^4`.
    pub residual: f64,
    pub min_eigenvalue: f64,
}

pub fn derivation_selfcommutator(a: &CMatrix, b: &CMatrix) -> Result<SelfCommutator> {
    let e = ElementaryOp::derivation(a.clone(), b.clone())?;
    let lift = e.kron_lift()?.matrix;
    let lift_star = lift.conj_transpose();
    let lhs = lift_star.matmul(&lift).sub(&lift.matmul(&lift_star));

    // independent path: assemble the multiplier lifts directly
    let d = a.rows();
    let id = CMatrix::identity(d);
    let astar = a.conj_transpose();
    let bstar = b.conj_transpose();
    let left_coeff = astar.matmul(a).sub(&a.matmul(&astar));
    let right_coeff = b.matmul(&bstar).sub(&bstar.matmul(b));
    let rhs = id.kron(&left_coeff).add(&right_coeff.transpose().kron(&id));

    let scale = (1.0 + a.frobenius_norm() + b.frobenius_norm()).powi(4);
    let residual = lhs.sub(&rhs).frobenius_norm() / scale;
    let min_eigenvalue = eigenvalues(&lhs)?
        .iter()
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);
    Ok(SelfCommutator {
        lhs,
        rhs,
        residual,
        min_eigenvalue,
    })
}
