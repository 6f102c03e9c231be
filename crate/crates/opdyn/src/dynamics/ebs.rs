//! Extended-backward-shift detector: the accumulated span of
//! `ker T^j ∩ ran T^j` over `j <= jmax`, as a fraction of the space.
//!
//! In infinite dimensions this span being dense is what makes an
//! operator an extended backward shift; at truncation the fraction is
//! capped by hard edge effects (for the truncated backward shift itself
//! the union tops out at floor(d/2) coordinates, not d), so scenario
//! verdicts compare against structural oracles rather than against 1.

use num_complex::Complex64 as C64;

use crate::error::{OpdynError, Result};
use crate::numlin::{svd, vec_dot, vec_norm, vec_scale, vec_sub, CMatrix};

#[derive(Debug, Clone)]
pub struct EbsOutcome {
    /// dim(span of the union) / d.
    pub fraction: f64,
    pub basis: Vec<Vec<C64>>,
    /// Per-power intersection dimensions `(j, dim(ker T^j ∩ ran T^j))`.
    pub per_power: Vec<(usize, usize)>,
}

/// Intersection of two orthonormal column families via principal
/// angles: directions whose cosine is within `tol` of 1.
fn subspace_intersection(
    null_basis: &[Vec<C64>],
    range_basis: &[Vec<C64>],
    tol: f64,
) -> Vec<Vec<C64>> {
    if null_basis.is_empty() || range_basis.is_empty() {
        return Vec::new();
    }
    let d = null_basis[0].len();
    let mut c = CMatrix::zeros(null_basis.len(), range_basis.len());
    for (i, n) in null_basis.iter().enumerate() {
        for (j, r) in range_basis.iter().enumerate() {
            c[(i, j)] = vec_dot(r, n);
        }
    }
    let dec = svd(&c).expect("principal angle matrix is finite");
    let mut out = Vec::new();
    for (k, &sigma) in dec.singular_values.iter().enumerate() {
        if sigma >= 1.0 - tol {
            // map the left singular vector back through the null basis
            let mut w = vec![C64::new(0.0, 0.0); d];
            for (i, n) in null_basis.iter().enumerate() {
                let coeff = dec.u[(i, k)];
                for (wi, ni) in w.iter_mut().zip(n) {
                    *wi += coeff * ni;
                }
            }
            out.push(w);
        }
    }
    out
}

fn absorb(basis: &mut Vec<Vec<C64>>, v: &[C64], tol: f64) {
    let mut w = v.to_vec();
    for b in basis.iter() {
        let coeff = vec_dot(&w, b);
        w = vec_sub(&w, &vec_scale(b, coeff));
    }
    let n = vec_norm(&w);
    if n > tol {
        basis.push(vec_scale(&w, C64::new(1.0 / n, 0.0)));
    }
}

pub fn ebs_subspace(t: &CMatrix, jmax: usize, tol: f64) -> Result<EbsOutcome> {
    let d = t.require_square()?;
    if jmax > d {
        return Err(OpdynError::Domain("jmax must not exceed the dimension".into()));
    }
    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut per_power = Vec::new();
    let mut power = CMatrix::identity(d);
    for j in 1..=jmax {
        power = power.matmul(t);
        let dec = svd(&power)?;
        let smax = dec.singular_values.first().copied().unwrap_or(0.0);
        let cutoff = smax * tol;
        let mut null_basis = Vec::new();
        let mut range_basis = Vec::new();
        for (k, &sigma) in dec.singular_values.iter().enumerate() {
            if sigma > cutoff && sigma > 0.0 {
                range_basis.push(dec.u.col(k));
            } else {
                null_basis.push(dec.v.col(k));
            }
        }
        let common = subspace_intersection(&null_basis, &range_basis, 1e-6);
        per_power.push((j, common.len()));
        for w in &common {
            absorb(&mut basis, w, 1e-8);
        }
    }
    Ok(EbsOutcome {
        fraction: basis.len() as f64 / d as f64,
        basis,
        per_power,
    })
}
