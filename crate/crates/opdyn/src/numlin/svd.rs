use num_complex::Complex64 as C64;

use crate::error::{OpdynError, Result};
use crate::numlin::matrix::{vec_dot, vec_norm, CMatrix};

/// Thin singular value decomposition `M = U S V^*`.
///
/// Singular values are nonincreasing (ties broken by original column
/// index); `u` is `m x r`, `v` is `n x r` with `r = min(m, n)`, both with
/// orthonormal columns.
#[derive(Debug, Clone)]
pub struct SvdDecomp {
    pub singular_values: Vec<f64>,
    pub u: CMatrix,
    pub v: CMatrix,
}

const MAX_SWEEPS: usize = 40;

/// One-sided Jacobi SVD. Deterministic; accurate for the dimensions this
/// crate targets (d <= 512).
pub fn svd(m: &CMatrix) -> Result<SvdDecomp> {
    if m.rows() < m.cols() {
        let t = svd(&m.conj_transpose())?;
        return Ok(SvdDecomp {
            singular_values: t.singular_values,
            u: t.v,
            v: t.u,
        });
    }
    let (rows, n) = (m.rows(), m.cols());
    let mut g = m.clone();
    let mut v = CMatrix::identity(n);
    let eps = f64::EPSILON;

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let gp = g.col(p);
                let gq = g.col(q);
                let app = vec_norm(&gp).powi(2);
                let aqq = vec_norm(&gq).powi(2);
                let apq = vec_dot(&gq, &gp); // <g_q, g_p> = g_p^H g_q
                let off = apq.norm();
                if off <= eps * (app * aqq).sqrt() || off == 0.0 {
                    continue;
                }
                rotated = true;
                // Phase so the coupling becomes real, then a real rotation.
                let phase = apq / off;
                let zeta = (aqq - app) / (2.0 * off);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let x = g[(i, p)];
                    let y = g[(i, q)] * phase.conj();
                    g[(i, p)] = C64::new(c, 0.0) * x - C64::new(s, 0.0) * y;
                    g[(i, q)] = C64::new(s, 0.0) * x + C64::new(c, 0.0) * y;
                }
                for i in 0..n {
                    let x = v[(i, p)];
                    let y = v[(i, q)] * phase.conj();
                    v[(i, p)] = C64::new(c, 0.0) * x - C64::new(s, 0.0) * y;
                    v[(i, q)] = C64::new(s, 0.0) * x + C64::new(c, 0.0) * y;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(OpdynError::Convergence {
            index: 0,
            context: format!("Jacobi SVD did not settle within {MAX_SWEEPS} sweeps"),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| vec_norm(&g.col(j))).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));

    let sigma_max = norms.iter().cloned().fold(0.0, f64::max);
    let tiny = sigma_max * eps * rows as f64;
    let mut u = CMatrix::zeros(rows, n);
    let mut vv = CMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        singular_values.push(norms[j]);
        vv.set_col(k, &v.col(j));
        if norms[j] > tiny {
            let col: Vec<C64> = g.col(j).iter().map(|z| z / norms[j]).collect();
            u.set_col(k, &col);
        }
    }
    // Complete U on numerically null columns by Gram-Schmidt against the
    // standard basis.
    for k in 0..n {
        if singular_values[k] > tiny {
            continue;
        }
        'basis: for b in 0..rows {
            let mut cand: Vec<C64> = (0..rows)
                .map(|i| if i == b { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
                .collect();
            for prev in 0..n {
                if prev == k {
                    continue;
                }
                let pcol = u.col(prev);
                if vec_norm(&pcol) == 0.0 {
                    continue;
                }
                let coef = vec_dot(&cand, &pcol);
                for i in 0..rows {
                    cand[i] -= coef * pcol[i];
                }
            }
            let nrm = vec_norm(&cand);
            if nrm > 0.5 {
                let col: Vec<C64> = cand.iter().map(|z| z / nrm).collect();
                u.set_col(k, &col);
                break 'basis;
            }
        }
    }

    Ok(SvdDecomp {
        singular_values,
        u,
        v: vv,
    })
}

impl SvdDecomp {
    pub fn reconstruct(&self) -> CMatrix {
        let r = self.singular_values.len();
        let mut us = self.u.clone();
        for k in 0..r {
            for i in 0..us.rows() {
                us[(i, k)] *= self.singular_values[k];
            }
        }
        us.matmul(&self.v.conj_transpose())
    }

    pub fn rank(&self, rel_tol: f64) -> usize {
        let smax = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values
            .iter()
            .filter(|&&s| s > rel_tol * smax)
            .count()
    }
}

/// Moore-Penrose pseudoinverse with relative singular value cutoff.
///
/// Singular values below `cutoff * sigma_max` are discarded; the zero
/// matrix maps to the zero matrix.
pub fn pinv(m: &CMatrix, cutoff: f64) -> Result<CMatrix> {
    if cutoff < 0.0 {
        return Err(OpdynError::Domain("pinv cutoff must be nonnegative".into()));
    }
    let dec = svd(m)?;
    let smax = dec.singular_values.first().copied().unwrap_or(0.0);
    // An exact-zero cutoff still has to ignore pure rounding noise.
    let floor = (cutoff * smax).max(smax * f64::EPSILON * m.rows().max(m.cols()) as f64);
    let r = dec.singular_values.len();
    let mut vs = dec.v.clone();
    for k in 0..r {
        let s = dec.singular_values[k];
        let inv = if s > floor { 1.0 / s } else { 0.0 };
        for i in 0..vs.rows() {
            vs[(i, k)] *= inv;
        }
    }
    Ok(vs.matmul(&dec.u.conj_transpose()))
}

/// Schatten p-norm: the l^p norm of the singular values. `p = INFINITY`
/// gives the operator norm, `p = 2` the Frobenius norm.
pub fn schatten_norm(m: &CMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(OpdynError::Domain(format!(
            "Schatten norm requires p >= 1, got {p}"
        )));
    }
    let sv = svd(m)?.singular_values;
    if p.is_infinite() {
        return Ok(sv.first().copied().unwrap_or(0.0));
    }
    Ok(sv.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p))
}
