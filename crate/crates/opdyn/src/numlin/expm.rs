use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::numlin::matrix::CMatrix;

/// Matrix exponential by scaling and squaring with a truncated power
/// series. The scaled series is summed until the next term falls below
/// 1e-16 of the running sum, which keeps the truncation error well under
/// 1e-12 relative for the dimensions this crate targets.
pub fn expm(m: &CMatrix) -> Result<CMatrix> {
    let n = m.require_square()?;
    let norm = m.one_norm();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m.scale(C64::new(1.0 / 2f64.powi(s as i32), 0.0));

    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for j in 1..=64u32 {
        term = term.matmul(&scaled).scale(C64::new(1.0 / j as f64, 0.0));
        sum = sum.add(&term);
        if term.frobenius_norm() <= 1e-16 * sum.frobenius_norm() {
            break;
        }
    }
    let mut out = sum;
    for _ in 0..s {
        out = out.matmul(&out);
    }
    Ok(out)
}
