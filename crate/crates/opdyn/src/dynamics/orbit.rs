//! Forward orbits `{T^n x}` by iterated application.

use num_complex::Complex64 as C64;

use crate::error::{OpdynError, Result};
use crate::numlin::{vec_norm, CMatrix};

pub const OVERFLOW_GUARD: f64 = 1e150;
pub const UNDERFLOW_FLUSH: f64 = 1e-150;

#[derive(Debug, Clone)]
pub struct OrbitPoint {
    pub n: u64,
    pub norm: f64,
    pub state: Option<Vec<C64>>,
}

#[derive(Debug, Clone)]
pub struct Orbit {
    pub points: Vec<OrbitPoint>,
    pub overflowed: bool,
    pub underflowed: bool,
}

/// Norms of `x, Tx, T^2 x, ..., T^N x`, each step one application of T
/// (never an explicit matrix power). Aborts early past the overflow
/// guard and flushes below the underflow threshold, both flagged.
pub fn orbit(t: &CMatrix, x: &[C64], n_max: u64, keep_states: bool) -> Result<Orbit> {
    let d = t.require_square()?;
    if x.len() != d {
        return Err(OpdynError::Dimension("orbit start vector dimension mismatch".into()));
    }
    if n_max < 1 {
        return Err(OpdynError::Domain("orbit length must be at least 1".into()));
    }
    let mut points = Vec::with_capacity(n_max as usize + 1);
    let mut state = x.to_vec();
    let mut overflowed = false;
    let mut underflowed = false;
    for n in 0..=n_max {
        let norm = vec_norm(&state);
        points.push(OrbitPoint {
            n,
            norm,
            state: keep_states.then(|| state.clone()),
        });
        if norm > OVERFLOW_GUARD {
            overflowed = true;
            break;
        }
        if norm < UNDERFLOW_FLUSH {
            underflowed = true;
            break;
        }
        if n < n_max {
            state = t.matvec(&state);
        }
    }
    Ok(Orbit { points, overflowed, underflowed })
}
