//! Symbolic operator specifications and their materialization as hard
//! truncations (compressions P_d T P_d) onto the first d coordinates.

use num_complex::Complex64 as C64;

use crate::error::{OpdynError, Result};
use crate::numlin::{expm, CMatrix};

/// How the truncated dual space is paired with the primal one.
///
/// Bilinear pairing `<x*, x> = sum x*_i x_i` models Banach-space duality;
/// the hermitian mode is used by the Hilbert-space machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    BilinearDual,
    Hermitian,
}

/// Finite model of the underlying space: dimension plus pairing mode.
#[derive(Debug, Clone, Copy)]
pub struct Truncation {
    pub dimension: usize,
    pub pairing: Pairing,
}

impl Truncation {
    pub fn bilinear(dimension: usize) -> Self {
        assert!(dimension >= 2, "truncation dimension must be at least 2");
        Truncation {
            dimension,
            pairing: Pairing::BilinearDual,
        }
    }

    pub fn hermitian(dimension: usize) -> Self {
        assert!(dimension >= 2, "truncation dimension must be at least 2");
        Truncation {
            dimension,
            pairing: Pairing::Hermitian,
        }
    }
}

/// Symbolic description of an operator before truncation.
///
/// Weight conventions (1-based, following the usual shift definitions):
/// - `BackwardShift { weights }`: `weights[i]` is `w_{i+2}`, so the
///   truncated matrix has `M[i][i+1] = weights[i]`.
/// - `ForwardShift { weights }`: `weights[i]` is `w_{i+1}`, so
///   `M[i+1][i] = weights[i]`.
/// - `EvenShift { weights }`: `weights[i]` is the weight attached to
///   coordinate `2(i+1)`, so row `i` reads `weights[i] * x_{2(i+1)}`.
#[derive(Debug, Clone)]
pub enum OperatorSpec {
    BackwardShift { weights: Vec<C64> },
    ForwardShift { weights: Vec<C64> },
    EvenShift { weights: Vec<C64> },
    Diagonal { entries: Vec<C64> },
    Identity,
    Zero,
    RankOne { functional: Vec<C64>, vector: Vec<C64> },
    Sum(Vec<(C64, OperatorSpec)>),
    Power(Box<OperatorSpec>, u32),
    Exp(Box<OperatorSpec>),
    /// `T' = e^T - I`, the exponential with the constant term removed.
    ExpMinusI(Box<OperatorSpec>),
    Transpose(Box<OperatorSpec>),
    ScalarPlusNilpotent { lambda: C64, nilpotent: CMatrix },
}

fn check_weights(weights: &[C64], needed: usize, what: &str) -> Result<()> {
    if weights.len() < needed {
        return Err(OpdynError::Specification(format!(
            "{what}: {needed} weights required up to the truncation dimension, got {}",
            weights.len()
        )));
    }
    if weights[..needed].iter().any(|w| w.norm() == 0.0) {
        return Err(OpdynError::Specification(format!(
            "{what}: weight sequences must consist of nonzero scalars"
        )));
    }
    Ok(())
}

/// Realize a spec on the basis vectors `e_1..e_d`; indices beyond `d` are
/// dropped.
pub fn materialize(spec: &OperatorSpec, trunc: &Truncation) -> Result<CMatrix> {
    let d = trunc.dimension;
    match spec {
        OperatorSpec::BackwardShift { weights } => {
            check_weights(weights, d - 1, "backward shift")?;
            let mut m = CMatrix::zeros(d, d);
            for i in 0..d - 1 {
                m[(i, i + 1)] = weights[i];
            }
            Ok(m)
        }
        OperatorSpec::ForwardShift { weights } => {
            check_weights(weights, d - 1, "forward shift")?;
            let mut m = CMatrix::zeros(d, d);
            for i in 0..d - 1 {
                m[(i + 1, i)] = weights[i];
            }
            Ok(m)
        }
        OperatorSpec::EvenShift { weights } => {
            // row i reads coordinate 2i+1 when it exists
            let rows: Vec<usize> = (0..d).filter(|i| 2 * i + 1 < d).collect();
            check_weights(weights, rows.len(), "even shift")?;
            let mut m = CMatrix::zeros(d, d);
            for &i in &rows {
                m[(i, 2 * i + 1)] = weights[i];
            }
            Ok(m)
        }
        OperatorSpec::Diagonal { entries } => {
            if entries.len() < d {
                return Err(OpdynError::Specification(format!(
                    "diagonal: {d} entries required, got {}",
                    entries.len()
                )));
            }
            Ok(CMatrix::diag(&entries[..d]))
        }
        OperatorSpec::Identity => Ok(CMatrix::identity(d)),
        OperatorSpec::Zero => Ok(CMatrix::zeros(d, d)),
        OperatorSpec::RankOne { functional, vector } => {
            if functional.len() < d || vector.len() < d {
                return Err(OpdynError::Specification(
                    "rank one: functional and vector must cover the truncation dimension".into(),
                ));
            }
            Ok(match trunc.pairing {
                Pairing::BilinearDual => CMatrix::outer(&vector[..d], &functional[..d]),
                Pairing::Hermitian => CMatrix::outer_herm(&vector[..d], &functional[..d]),
            })
        }
        OperatorSpec::Sum(terms) => {
            let mut acc = CMatrix::zeros(d, d);
            for (coef, term) in terms {
                acc = acc.add(&materialize(term, trunc)?.scale(*coef));
            }
            Ok(acc)
        }
        OperatorSpec::Power(inner, n) => Ok(materialize(inner, trunc)?.pow(*n)),
        OperatorSpec::Exp(inner) => expm(&materialize(inner, trunc)?),
        OperatorSpec::ExpMinusI(inner) => {
            Ok(expm(&materialize(inner, trunc)?)?.sub(&CMatrix::identity(d)))
        }
        OperatorSpec::Transpose(inner) => Ok(materialize(inner, trunc)?.transpose()),
        OperatorSpec::ScalarPlusNilpotent { lambda, nilpotent } => {
            let n = nilpotent.require_square()?;
            if n != d {
                return Err(OpdynError::Specification(format!(
                    "scalar-plus-nilpotent: matrix is {n}x{n} but truncation is {d}"
                )));
            }
            for i in 0..d {
                for j in 0..=i {
                    if nilpotent[(i, j)].norm() != 0.0 {
                        return Err(OpdynError::Specification(
                            "scalar-plus-nilpotent: nilpotent part must be strictly upper".into(),
                        ));
                    }
                }
            }
            Ok(CMatrix::identity(d).scale(*lambda).add(nilpotent))
        }
    }
}

/// The truncated dual adjoint: plain transpose in bilinear-dual mode,
/// conjugate transpose in hermitian mode.
pub fn dual_adjoint(m: &CMatrix, trunc: &Truncation) -> Result<CMatrix> {
    m.require_square()?;
    Ok(match trunc.pairing {
        Pairing::BilinearDual => m.transpose(),
        Pairing::Hermitian => m.conj_transpose(),
    })
}

/// Geometric vector `(1, mu, mu^2, ..., mu^{d-1})`, unnormalized.
///
/// For the unweighted backward shift only the last coordinate of
/// `B x - mu x` survives, so the shift-eigenvector residual is
/// `|mu * x_d| = |mu|^d`. Callers wanting an approximate eigenvector
/// should keep `|mu| < 1`.
pub fn geometric_vector(mu: C64, trunc: &Truncation) -> Vec<C64> {
    let d = trunc.dimension;
    let mut v = Vec::with_capacity(d);
    let mut acc = C64::new(1.0, 0.0);
    for _ in 0..d {
        v.push(acc);
        acc *= mu;
    }
    v
}

/// Coordinate recursion `x_{n+1} = mu x_n / w_{n+1}` solving
/// `B_w x = mu x` up to the truncation edge. `weights[i]` is `w_{i+2}`
/// as in [`OperatorSpec::BackwardShift`].
pub fn weighted_shift_eigenvector(mu: C64, weights: &[C64], d: usize) -> Result<Vec<C64>> {
    check_weights(weights, d - 1, "weighted shift eigenvector")?;
    let mut v = Vec::with_capacity(d);
    let mut acc = C64::new(1.0, 0.0);
    v.push(acc);
    for i in 0..d - 1 {
        acc = mu * acc / weights[i];
        v.push(acc);
    }
    Ok(v)
}

pub fn uniform_weights(n: usize) -> Vec<C64> {
    vec![C64::new(1.0, 0.0); n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::{unit_vector, vec_norm, vec_scale, vec_sub};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn backward_shift_on_basis_vectors() {
        let t = Truncation::bilinear(3);
        let b = materialize(
            &OperatorSpec::BackwardShift {
                weights: uniform_weights(2),
            },
            &t,
        )
        .unwrap();
        let e1 = unit_vector(3, 0);
        let e2 = unit_vector(3, 1);
        assert_eq!(b.matvec(&e2), e1);
        assert!(vec_norm(&b.matvec(&e1)) == 0.0);
    }

    #[test]
    fn even_shift_action() {
        let t = Truncation::bilinear(4);
        let w = vec![c(2.0), c(3.0)];
        let dw = materialize(&OperatorSpec::EvenShift { weights: w }, &t).unwrap();
        let x = vec![c(1.0), c(10.0), c(100.0), c(1000.0)];
        // (w_2 x_2, w_4 x_4, 0, 0)
        let y = dw.matvec(&x);
        assert!((y[0] - c(20.0)).norm() < 1e-14);
        assert!((y[1] - c(3000.0)).norm() < 1e-14);
        assert!(y[2].norm() == 0.0 && y[3].norm() == 0.0);
    }

    #[test]
    fn rank_one_bilinear_pairing() {
        let t = Truncation::bilinear(3);
        let xs = vec![c(1.0), c(2.0), c(3.0)];
        let x = vec![c(1.0), c(0.0), c(-1.0)];
        let m = materialize(
            &OperatorSpec::RankOne {
                functional: xs.clone(),
                vector: x.clone(),
            },
            &t,
        )
        .unwrap();
        let z = vec![c(1.0), c(1.0), c(1.0)];
        // <x*, z> = 6, so m z = 6 x
        let want = vec_scale(&x, c(6.0));
        assert!(vec_norm(&vec_sub(&m.matvec(&z), &want)) < 1e-12);
    }

    #[test]
    fn forward_shift_dual_is_backward_with_shifted_weights() {
        // (I + S_{(w_{n+1})})^t = I + B_w with the bilinear pairing.
        let d = 5;
        let t = Truncation::bilinear(d);
        let w: Vec<C64> = (0..d).map(|i| c(1.0 + 0.1 * i as f64)).collect();
        // S_{(w_{n+1})} uses weights w_2, w_3, ... in the forward positions.
        let fwd = materialize(
            &OperatorSpec::ForwardShift {
                weights: w[1..].to_vec(),
            },
            &t,
        )
        .unwrap();
        let bwd = materialize(
            &OperatorSpec::BackwardShift {
                weights: w[1..].to_vec(),
            },
            &t,
        )
        .unwrap();
        let lhs = CMatrix::identity(d)
            .add(&fwd)
            .transpose();
        let rhs = CMatrix::identity(d).add(&bwd);
        assert!(lhs.approx_eq(&rhs, 1e-14));
    }

    #[test]
    fn adjoint_reverses_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = Truncation::bilinear(4);
        let m = CMatrix::random(4, 4, &mut rng);
        let n = CMatrix::random(4, 4, &mut rng);
        let lhs = dual_adjoint(&m.matmul(&n), &t).unwrap();
        let rhs = dual_adjoint(&n, &t)
            .unwrap()
            .matmul(&dual_adjoint(&m, &t).unwrap());
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn sum_is_linear_and_power_is_exact() {
        let t = Truncation::bilinear(6);
        let b = OperatorSpec::BackwardShift {
            weights: uniform_weights(5),
        };
        let sum = OperatorSpec::Sum(vec![(c(2.0), OperatorSpec::Identity), (c(-3.0), b.clone())]);
        let got = materialize(&sum, &t).unwrap();
        let want = CMatrix::identity(6)
            .scale(c(2.0))
            .add(&materialize(&b, &t).unwrap().scale(c(-3.0)));
        assert!(got.approx_eq(&want, 0.0));

        for n in [0u32, 1, 3, 16] {
            let p = materialize(&OperatorSpec::Power(Box::new(b.clone()), n), &t).unwrap();
            assert!(p.approx_eq(&materialize(&b, &t).unwrap().pow(n), 0.0));
        }
    }

    #[test]
    fn exp_minus_i_matches_expm() {
        let t = Truncation::bilinear(6);
        let b = OperatorSpec::BackwardShift {
            weights: uniform_weights(5),
        };
        let tprime = materialize(&OperatorSpec::ExpMinusI(Box::new(b.clone())), &t).unwrap();
        let et = expm(&materialize(&b, &t).unwrap()).unwrap();
        let recon = CMatrix::identity(6).add(&tprime);
        assert!(recon.approx_eq(&et, 1e-10));
    }

    #[test]
    fn geometric_vector_residuals() {
        let t = Truncation::bilinear(8);
        assert_eq!(geometric_vector(c(0.0), &t), unit_vector(8, 0));

        let mu = c(0.5);
        let x = geometric_vector(mu, &t);
        let b = materialize(
            &OperatorSpec::BackwardShift {
                weights: uniform_weights(7),
            },
            &t,
        )
        .unwrap();
        let r = vec_sub(&b.matvec(&x), &vec_scale(&x, mu));
        assert!((vec_norm(&r) - 0.5f64.powi(8)).abs() < 1e-14);
    }

    #[test]
    fn weighted_eigenvector_recursion_residual_at_last_coordinate() {
        let d = 8;
        let w: Vec<C64> = (0..d - 1).map(|i| c(1.0 + 0.2 * i as f64)).collect();
        let mu = C64::new(0.4, 0.1);
        let x = weighted_shift_eigenvector(mu, &w, d).unwrap();
        let t = Truncation::bilinear(d);
        let bw = materialize(&OperatorSpec::BackwardShift { weights: w }, &t).unwrap();
        let r = vec_sub(&bw.matvec(&x), &vec_scale(&x, mu));
        // Only the last coordinate of the residual survives.
        for ri in &r[..d - 1] {
            assert!(ri.norm() < 1e-14);
        }
        assert!((r[d - 1].norm() - (mu * x[d - 1]).norm()).abs() < 1e-14);
    }

    #[test]
    fn truncated_shift_inverse_identity_on_leading_block() {
        // B_w S_{w'} = I on the first d-1 coordinates when w' are the
        // reciprocal weights; the last coordinate is lost to truncation.
        let d = 6;
        let t = Truncation::bilinear(d);
        let w: Vec<C64> = (0..d - 1).map(|i| c(1.5 + 0.3 * i as f64)).collect();
        let winv: Vec<C64> = w.iter().map(|z| C64::new(1.0, 0.0) / z).collect();
        let b = materialize(&OperatorSpec::BackwardShift { weights: w }, &t).unwrap();
        let s = materialize(&OperatorSpec::ForwardShift { weights: winv }, &t).unwrap();
        let prod = b.matmul(&s);
        for i in 0..d - 1 {
            for j in 0..d - 1 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - c(want)).norm() < 1e-14);
            }
        }
        assert!(prod[(d - 1, d - 1)].norm() == 0.0);
    }

    #[test]
    fn zero_weights_rejected() {
        let t = Truncation::bilinear(3);
        let spec = OperatorSpec::BackwardShift {
            weights: vec![c(1.0), c(0.0)],
        };
        assert!(matches!(
            materialize(&spec, &t),
            Err(OpdynError::Specification(_))
        ));
    }
}
