use num_complex::Complex64 as C64;

use crate::error::{OpdynError, Result};
use crate::numlin::matrix::{vec_norm, vec_normalize, vec_scale, vec_sub, CMatrix};

/// Hard cap on the eigensolver dimension.
pub const EIG_DIM_CAP: usize = 512;

/// Eigendecomposition of a square complex matrix.
///
/// Eigenvalues are sorted lexicographically by (re, im) with their
/// eigenvectors kept in step; `residuals[k] = ||M v_k - lambda_k v_k||`.
#[derive(Debug, Clone)]
pub struct EigenDecomp {
    pub eigenvalues: Vec<C64>,
    /// Unit-norm eigenvector columns paired with `eigenvalues`.
    pub eigenvectors: CMatrix,
    pub residuals: Vec<f64>,
    /// Smallest tolerance such that every residual is within
    /// `tolerance * ||M||_F`.
    pub tolerance: f64,
}

struct Givens {
    c: C64,
    s: C64,
}

fn givens(a: C64, b: C64) -> (Givens, C64) {
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r == 0.0 {
        return (
            Givens {
                c: C64::new(1.0, 0.0),
                s: C64::new(0.0, 0.0),
            },
            C64::new(0.0, 0.0),
        );
    }
    let c = a.conj() / r;
    let s = b.conj() / r;
    (Givens { c, s }, C64::new(r, 0.0))
}

/// Complex Schur form `M = Q T Q^*` with `T` upper triangular.
pub struct Schur {
    pub t: CMatrix,
    pub q: CMatrix,
}

pub fn schur(m: &CMatrix) -> Result<Schur> {
    let n = m.require_square()?;
    if n > EIG_DIM_CAP {
        return Err(OpdynError::CapExceeded(format!(
            "eigensolver dimension {n} exceeds cap {EIG_DIM_CAP}"
        )));
    }
    let mut h = m.clone();
    let mut q = CMatrix::identity(n);

    // Hessenberg reduction by Householder reflections.
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = vec_norm(&v);
        if xnorm <= f64::EPSILON * h.frobenius_norm() {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm = vec_norm(&v);
        if vnorm <= f64::EPSILON * xnorm {
            continue;
        }
        let v = vec_scale(&v, C64::new(1.0 / vnorm, 0.0));
        let two = C64::new(2.0, 0.0);
        // Left: rows k+1..n.
        for j in k..n {
            let dot: C64 = (k + 1..n).map(|i| v[i - k - 1].conj() * h[(i, j)]).sum();
            let f = two * dot;
            for i in k + 1..n {
                let sub = f * v[i - k - 1];
                h[(i, j)] -= sub;
            }
        }
        // Right: columns k+1..n.
        for i in 0..n {
            let dot: C64 = (k + 1..n).map(|j| h[(i, j)] * v[j - k - 1]).sum();
            let f = two * dot;
            for j in k + 1..n {
                let sub = f * v[j - k - 1].conj();
                h[(i, j)] -= sub;
            }
        }
        for i in 0..n {
            let dot: C64 = (k + 1..n).map(|j| q[(i, j)] * v[j - k - 1]).sum();
            let f = two * dot;
            for j in k + 1..n {
                let sub = f * v[j - k - 1].conj();
                q[(i, j)] -= sub;
            }
        }
    }

    // Shifted QR iteration on the Hessenberg form.
    let eps = f64::EPSILON;
    let max_total = 100 * n.max(1);
    let mut total_iters = 0usize;
    let mut hi = n.saturating_sub(1);
    let mut stagnation = 0usize;
    loop {
        // Deflate converged trailing eigenvalues.
        while hi > 0 {
            let small = eps * (h[(hi - 1, hi - 1)].norm() + h[(hi, hi)].norm()).max(h.frobenius_norm() * eps);
            if h[(hi, hi - 1)].norm() <= small {
                h[(hi, hi - 1)] = C64::new(0.0, 0.0);
                hi -= 1;
                stagnation = 0;
            } else {
                break;
            }
        }
        if hi == 0 {
            break;
        }
        // Active block starts after the last negligible subdiagonal entry.
        let mut lo = 0;
        for i in (1..=hi).rev() {
            let small = eps * (h[(i - 1, i - 1)].norm() + h[(i, i)].norm()).max(h.frobenius_norm() * eps);
            if h[(i, i - 1)].norm() <= small {
                h[(i, i - 1)] = C64::new(0.0, 0.0);
                lo = i;
                break;
            }
        }

        total_iters += 1;
        stagnation += 1;
        if total_iters > max_total {
            return Err(OpdynError::Convergence {
                index: hi,
                context: format!("QR iteration exceeded {max_total} steps"),
            });
        }

        // Wilkinson shift from the trailing 2x2, with an occasional
        // exceptional shift to break symmetric stalls.
        let a = h[(hi - 1, hi - 1)];
        let b = h[(hi - 1, hi)];
        let c = h[(hi, hi - 1)];
        let d = h[(hi, hi)];
        let shift = if stagnation % 12 == 0 {
            d + C64::new(1.5 * c.norm(), 0.5 * c.norm())
        } else {
            let tr = a + d;
            let det = a * d - b * c;
            let disc = (tr * tr - C64::new(4.0, 0.0) * det).sqrt();
            let l1 = (tr + disc) / 2.0;
            let l2 = (tr - disc) / 2.0;
            if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };

        for i in lo..=hi {
            h[(i, i)] -= shift;
        }
        let mut rots: Vec<Givens> = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (g, r) = givens(h[(i, i)], h[(i + 1, i)]);
            h[(i, i)] = r;
            h[(i + 1, i)] = C64::new(0.0, 0.0);
            for j in i + 1..n {
                let x = h[(i, j)];
                let y = h[(i + 1, j)];
                h[(i, j)] = g.c * x + g.s * y;
                h[(i + 1, j)] = -g.s.conj() * x + g.c.conj() * y;
            }
            rots.push(g);
        }
        for (idx, g) in rots.iter().enumerate() {
            let i = lo + idx;
            let top = (i + 1).min(hi);
            for r in 0..=top + 0 {
                let x = h[(r, i)];
                let y = h[(r, i + 1)];
                h[(r, i)] = x * g.c.conj() + y * g.s.conj();
                h[(r, i + 1)] = -x * g.s + y * g.c;
            }
            for r in 0..n {
                let x = q[(r, i)];
                let y = q[(r, i + 1)];
                q[(r, i)] = x * g.c.conj() + y * g.s.conj();
                q[(r, i + 1)] = -x * g.s + y * g.c;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += shift;
        }
    }

    // Clean the strictly lower part.
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok(Schur { t: h, q })
}

/// Eigendecomposition via complex Schur form plus triangular
/// back-substitution for the eigenvectors.
pub fn eig(m: &CMatrix) -> Result<EigenDecomp> {
    let n = m.require_square()?;
    let Schur { t, q } = schur(m)?;
    let mnorm = m.frobenius_norm();
    let smallnum = (f64::EPSILON * mnorm).max(f64::MIN_POSITIVE.sqrt());

    let mut pairs: Vec<(C64, Vec<C64>)> = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = vec![C64::new(0.0, 0.0); n];
        y[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = C64::new(0.0, 0.0);
            for j in i + 1..=k {
                acc += t[(i, j)] * y[j];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < smallnum {
                denom = C64::new(smallnum, 0.0);
            }
            y[i] = -acc / denom;
        }
        let v = vec_normalize(&q.matvec(&y));
        pairs.push((lambda, v));
    }

    pairs.sort_by(|a, b| {
        a.0.re
            .total_cmp(&b.0.re)
            .then(a.0.im.total_cmp(&b.0.im))
    });

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = CMatrix::zeros(n, n);
    let mut residuals = Vec::with_capacity(n);
    for (k, (lambda, v)) in pairs.iter().enumerate() {
        eigenvalues.push(*lambda);
        eigenvectors.set_col(k, v);
        let r = vec_sub(&m.matvec(v), &vec_scale(v, *lambda));
        residuals.push(vec_norm(&r));
    }
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    let tolerance = if mnorm > 0.0 { worst / mnorm } else { 0.0 }.max(1e-14);
    Ok(EigenDecomp {
        eigenvalues,
        eigenvectors,
        residuals,
        tolerance,
    })
}

/// Eigenvalues only (same path, vectors discarded).
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    let Schur { t, .. } = schur(m)?;
    let n = t.rows();
    let mut vals: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    vals.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(vals)
}
