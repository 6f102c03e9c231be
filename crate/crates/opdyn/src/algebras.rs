//! Scalar-plus-nilpotent model algebras with multiplicative functionals,
//! and the obstruction/contrast scenarios they support.
//!
//! Two models:
//! - upper-triangular matrices with constant diagonal (`lambda I + K`,
//!   ideal = strictly upper), carrying `phi(lambda I + K) = lambda`;
//! - banded-Toeplitz upper triangulars (`sum lambda_j S^j + K` with `K`
//!   supported on superdiagonals >= k), carrying `phi = lambda_0`.
//!
//! Both functionals are multiplicative exactly in IEEE arithmetic: the
//! scalar part of a product is the literal product of the scalar parts.

use num_complex::Complex64 as C64;

use crate::dynamics::{
    hcc_probe, riesz_classify, Certificate, HccConfig, ProbeReport,
};
use crate::elementary::ElementaryOp;
use crate::error::{OpdynError, Result};
use crate::numlin::CMatrix;
use crate::opmodel::{OperatorSpec, Truncation};

/// `lambda I + K` with `K` strictly upper triangular.
#[derive(Debug, Clone)]
pub struct AhModelElement {
    pub lambda: C64,
    pub k: CMatrix,
}

impl AhModelElement {
    pub fn matrix(&self) -> CMatrix {
        let d = self.k.rows();
        CMatrix::identity(d).scale(self.lambda).add(&self.k)
    }
}

/// `sum_{j<k} lambda_j S^j + K` with `S` the superdiagonal shift and `K`
/// supported on superdiagonals >= k.
#[derive(Debug, Clone)]
pub struct TarbardModelElement {
    pub coefficients: Vec<C64>,
    pub k: CMatrix,
    pub order: usize,
}

impl TarbardModelElement {
    pub fn matrix(&self) -> CMatrix {
        let d = self.k.rows();
        let mut m = self.k.clone();
        for (j, lam) in self.coefficients.iter().enumerate() {
            for i in 0..d - j {
                m[(i, i + j)] += lam;
            }
        }
        m
    }
}

/// Evaluation rule of the model's multiplicative functional.
#[derive(Debug, Clone, Copy)]
pub enum MultiplicativeFunctional {
    /// `phi(lambda I + K) = lambda`.
    AhScalar,
    /// `phi(sum lambda_j S^j + K) = lambda_0`, with the given band order.
    TarbardLeading { order: usize },
}

impl MultiplicativeFunctional {
    /// Evaluate on a raw matrix, enforcing model membership.
    pub fn apply(&self, m: &CMatrix, tol: f64) -> Result<C64> {
        match self {
            MultiplicativeFunctional::AhScalar => Ok(ah_decompose(m, tol)?.lambda),
            MultiplicativeFunctional::TarbardLeading { order } => {
                Ok(tarbard_decompose(m, *order, tol)?.coefficients[0])
            }
        }
    }
}

fn membership_err(what: &str) -> OpdynError {
    OpdynError::Membership(what.into())
}

/// Split an upper-triangular matrix with constant diagonal into its
/// scalar and strictly-upper parts.
pub fn ah_decompose(m: &CMatrix, tol: f64) -> Result<AhModelElement> {
    let d = m.require_square()?;
    let scale = m.max_abs().max(1.0);
    let lambda = m[(0, 0)];
    for i in 0..d {
        if (m[(i, i)] - lambda).norm() > tol * scale {
            return Err(membership_err("diagonal is not constant"));
        }
        for j in 0..i {
            if m[(i, j)].norm() > tol * scale {
                return Err(membership_err("matrix is not upper triangular"));
            }
        }
    }
    let mut k = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in i + 1..d {
            k[(i, j)] = m[(i, j)];
        }
    }
    Ok(AhModelElement { lambda, k })
}

/// Split a banded-Toeplitz upper triangular into polynomial-in-S and
/// residual-ideal parts: superdiagonal `j < order` must be constant and
/// yields `lambda_j`; everything from superdiagonal `order` on is `K`.
pub fn tarbard_decompose(m: &CMatrix, order: usize, tol: f64) -> Result<TarbardModelElement> {
    let d = m.require_square()?;
    if order == 0 || order >= d {
        return Err(OpdynError::Domain(
            "band order must satisfy 1 <= k < d so that S^k vanishes while S^{k-1} does not".into(),
        ));
    }
    let scale = m.max_abs().max(1.0);
    for i in 0..d {
        for j in 0..i {
            if m[(i, j)].norm() > tol * scale {
                return Err(membership_err("matrix is not upper triangular"));
            }
        }
    }
    let mut coefficients = Vec::with_capacity(order);
    for j in 0..order {
        let lam = m[(0, j)];
        for i in 0..d - j {
            if (m[(i, i + j)] - lam).norm() > tol * scale {
                return Err(membership_err("leading superdiagonals are not Toeplitz"));
            }
        }
        coefficients.push(lam);
    }
    let mut k = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in i + order..d {
            k[(i, j)] = m[(i, j)];
        }
    }
    Ok(TarbardModelElement { coefficients, k, order })
}

#[derive(Debug, Clone)]
pub struct FunctionalEigenCheck {
    pub eigenvalue: C64,
    /// Worst defect of `phi(E(s)) = eigenvalue * phi(s)` over an algebra
    /// basis; zero in exact arithmetic.
    pub residual: f64,
}

/// The model functional is an eigenvector of the adjoint of any
/// elementary operator with factors in the algebra, with eigenvalue
/// `sum phi(a_j) phi(b_j)`.
pub fn functional_eigen_check(
    e: &ElementaryOp,
    phi: &MultiplicativeFunctional,
    tol: f64,
) -> Result<FunctionalEigenCheck> {
    let d = e.dim();
    let mut eigenvalue = C64::new(0.0, 0.0);
    for (a, b) in e.pairs() {
        eigenvalue += phi.apply(a, tol)? * phi.apply(b, tol)?;
    }

    // algebra basis: the identity plus the ideal's matrix units
    let mut basis: Vec<CMatrix> = vec![CMatrix::identity(d)];
    let lowest = match phi {
        MultiplicativeFunctional::AhScalar => 1,
        MultiplicativeFunctional::TarbardLeading { order } => {
            // include the polynomial part generators S^1..S^{k-1} too
            for j in 1..*order {
                let mut s = CMatrix::zeros(d, d);
                for i in 0..d - j {
                    s[(i, i + j)] = C64::new(1.0, 0.0);
                }
                basis.push(s);
            }
            *order
        }
    };
    for i in 0..d {
        for j in (i + lowest)..d {
            let mut unit = CMatrix::zeros(d, d);
            unit[(i, j)] = C64::new(1.0, 0.0);
            basis.push(unit);
        }
    }

    let mut residual = 0.0f64;
    for s in &basis {
        let image = e.apply(s)?;
        let lhs = phi.apply(&image, tol)?;
        let rhs = eigenvalue * phi.apply(s, tol)?;
        residual = residual.max((lhs - rhs).norm());
    }
    Ok(FunctionalEigenCheck { eigenvalue, residual })
}

/// Paired reports contrasting dynamics on the ideal with the functional
/// obstruction on the full algebra.
#[derive(Debug, Clone)]
pub struct IdealContrast {
    /// Probe of the left-multiplier derivation compressed to the ideal.
    pub ideal_report: ProbeReport,
    /// Functional obstruction on the full algebra.
    pub full_report: ProbeReport,
    pub functional_eigenvalue: C64,
}

/// Index map of the strictly-upper coordinate subspace inside the
/// column-stacked lift.
fn ideal_indices(d: usize) -> Vec<usize> {
    let mut idx = Vec::with_capacity(d * (d - 1) / 2);
    for j in 0..d {
        for i in 0..j {
            idx.push(j * d + i);
        }
    }
    idx
}

/// Run the derivation `T -> K T + lambda T` both ways: compressed to the
/// strictly-upper ideal (where it can satisfy the criterion) and against
/// the full-algebra functional (where it never can).
pub fn ideal_contrast_scenario(
    lambda: C64,
    k: &CMatrix,
    hcc: &HccConfig,
    tol: f64,
) -> Result<IdealContrast> {
    let d = k.require_square()?;
    let elem = AhModelElement { lambda: C64::new(0.0, 0.0), k: k.clone() };
    // membership: K must be strictly upper
    if !ah_decompose(&elem.matrix(), 1e-12)?.k.approx_eq(k, 0.0) {
        return Err(membership_err("K must be strictly upper triangular"));
    }

    let id = CMatrix::identity(d);
    let e = ElementaryOp::new(vec![
        (k.clone(), id.clone()),
        (id.clone().scale(lambda), id.clone()),
    ])?;
    let lift = e.kron_lift()?.matrix;
    let idx = ideal_indices(d);

    // the derivation maps the ideal into itself; assert the sparsity
    // pattern before compressing
    let inside: std::collections::HashSet<usize> = idx.iter().copied().collect();
    for &col in &idx {
        for row in 0..lift.rows() {
            if !inside.contains(&row) && lift[(row, col)].norm() > 0.0 {
                return Err(OpdynError::Specification(
                    "derivation does not preserve the ideal subspace".into(),
                ));
            }
        }
    }
    let m = idx.len();
    let mut compressed = CMatrix::zeros(m, m);
    for (pi, &p) in idx.iter().enumerate() {
        for (qi, &q) in idx.iter().enumerate() {
            compressed[(pi, qi)] = lift[(p, q)];
        }
    }
    let ideal_outcome = hcc_probe(&compressed, hcc)?;

    let phi = MultiplicativeFunctional::AhScalar;
    let check = functional_eigen_check(&e, &phi, tol)?;
    let mut full_report = ProbeReport::new("functional-obstruction");
    full_report.param("eigenvalue", check.eigenvalue);
    full_report.param("residual", check.residual);
    if check.residual <= tol {
        full_report.mark_obstructed(Certificate::eigenpair(
            check.eigenvalue,
            check.residual,
            "multiplicative functional is an adjoint eigenvector on the full algebra",
        ));
    }
    Ok(IdealContrast {
        ideal_report: ideal_outcome.report,
        full_report,
        functional_eigenvalue: check.eigenvalue,
    })
}

#[derive(Debug, Clone)]
pub struct CommutatorModelCheck {
    pub report: ProbeReport,
    /// `max |lift(Delta_{lambda I + K}) - lift(Delta_K)|`; exactly zero.
    pub lift_gap: f64,
}

/// The commutator map ignores the scalar part — `Delta_{lambda I + K} =
/// Delta_K` — exactly, entry for entry, and `Delta_K` of a nilpotent is
/// spectrally obstructed.
pub fn commutator_model_check(elem: &AhModelElement) -> Result<CommutatorModelCheck> {
    let a = elem.matrix();
    let lift_a = ElementaryOp::commutator(a)?.kron_lift()?.matrix;
    let lift_k = ElementaryOp::commutator(elem.k.clone())?.kron_lift()?.matrix;
    let lift_gap = lift_a.sub(&lift_k).max_abs();

    let d = elem.k.rows();
    let trunc = Truncation::bilinear(d);
    let spec = OperatorSpec::ScalarPlusNilpotent {
        lambda: C64::new(0.0, 0.0),
        nilpotent: elem.k.clone(),
    };
    let riesz = riesz_classify(&spec, &spec, &trunc)?;
    let mut report = riesz.report;
    report.param("lift_gap", lift_gap);
    Ok(CommutatorModelCheck { report, lift_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Verdict;
    use crate::opmodel::{materialize, uniform_weights};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn random_ah(d: usize, rng: &mut ChaCha8Rng) -> AhModelElement {
        let full = CMatrix::random(d, d, rng);
        let mut k = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in i + 1..d {
                k[(i, j)] = full[(i, j)];
            }
        }
        AhModelElement { lambda: full[(0, 0)], k }
    }

    #[test]
    fn ah_decompose_basics() {
        let m = CMatrix::identity(3).scale(c(3.0));
        let e = ah_decompose(&m, 1e-12).unwrap();
        assert_eq!(e.lambda, c(3.0));
        assert_eq!(e.k.max_abs(), 0.0);

        let mut m = CMatrix::identity(2);
        m[(0, 1)] = c(1.0);
        let e = ah_decompose(&m, 1e-12).unwrap();
        assert_eq!(e.lambda, c(1.0));
        assert_eq!(e.k[(0, 1)], c(1.0));
    }

    #[test]
    fn ah_decompose_rejects_outsiders() {
        let m = CMatrix::diag_real(&[1.0, 2.0]);
        assert!(ah_decompose(&m, 1e-12).is_err());
        let mut lower = CMatrix::identity(2);
        lower[(1, 0)] = c(1.0);
        assert!(ah_decompose(&lower, 1e-12).is_err());
    }

    #[test]
    fn ah_product_decomposition_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..20 {
            let e0 = random_ah(5, &mut rng);
            let e1 = random_ah(5, &mut rng);
            let product = e0.matrix().matmul(&e1.matrix());
            let dec = ah_decompose(&product, 1e-10).unwrap();
            // scalar part multiplies exactly
            assert_eq!(dec.lambda, e0.lambda * e1.lambda);
            // ideal part is lambda0 K + lambda K0 + K0 K
            let want = e1.k.scale(e0.lambda)
                .add(&e0.k.scale(e1.lambda))
                .add(&e0.k.matmul(&e1.k));
            assert!(dec.k.approx_eq(&want, 1e-12));
        }
    }

    #[test]
    fn functional_eigen_check_derivation() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let a = random_ah(6, &mut rng);
        let b = random_ah(6, &mut rng);
        let e = ElementaryOp::derivation(a.matrix(), b.matrix()).unwrap();
        let out = functional_eigen_check(&e, &MultiplicativeFunctional::AhScalar, 1e-10).unwrap();
        assert!((out.eigenvalue - (a.lambda - b.lambda)).norm() < 1e-14);
        assert!(out.residual <= 1e-12 * a.matrix().max_abs().max(1.0));
    }

    #[test]
    fn functional_vanishes_on_the_ideal() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let mut a = random_ah(5, &mut rng);
        let mut b = random_ah(5, &mut rng);
        a.lambda = c(0.0);
        b.lambda = c(0.0);
        let e = ElementaryOp::new(vec![(a.matrix(), b.matrix())]).unwrap();
        let out = functional_eigen_check(&e, &MultiplicativeFunctional::AhScalar, 1e-10).unwrap();
        assert_eq!(out.eigenvalue, c(0.0));
        assert!(out.residual <= 1e-12);
    }

    #[test]
    fn functional_eigen_check_three_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let d = 8;
        let pairs: Vec<(CMatrix, CMatrix)> = (0..3)
            .map(|_| (random_ah(d, &mut rng).matrix(), random_ah(d, &mut rng).matrix()))
            .collect();
        let e = ElementaryOp::new(pairs.clone()).unwrap();
        let e_check = functional_eigen_check(&e, &MultiplicativeFunctional::AhScalar, 1e-8).unwrap();
        let want: C64 = pairs
            .iter()
            .map(|(a, b)| a[(0, 0)] * b[(0, 0)])
            .sum();
        assert!((e_check.eigenvalue - want).norm() < 1e-14);
        assert!(e_check.residual <= 1e-12 * e.pairs()[0].0.max_abs().powi(2).max(1.0));
    }

    #[test]
    fn tarbard_decompose_basics() {
        let d = 5;
        let mut m = CMatrix::identity(d).scale(c(2.0));
        for i in 0..d - 1 {
            m[(i, i + 1)] = c(3.0);
        }
        let e = tarbard_decompose(&m, 2, 1e-12).unwrap();
        assert_eq!(e.coefficients, vec![c(2.0), c(3.0)]);
        assert_eq!(e.k.max_abs(), 0.0);
        assert!(e.matrix().approx_eq(&m, 0.0));
    }

    #[test]
    fn tarbard_phi_multiplicative_on_seeded_pairs() {
        let d = 7;
        let order = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        let phi = MultiplicativeFunctional::TarbardLeading { order };
        for _ in 0..20 {
            let mk = |rng: &mut ChaCha8Rng| {
                let full = CMatrix::random(d, d, rng);
                let mut coeffs = Vec::new();
                for j in 0..order {
                    coeffs.push(full[(0, j)]);
                }
                let mut k = CMatrix::zeros(d, d);
                for i in 0..d {
                    for j in i + order..d {
                        k[(i, j)] = full[(i, j)];
                    }
                }
                TarbardModelElement { coefficients: coeffs, k, order }
            };
            let m = mk(&mut rng).matrix();
            let n = mk(&mut rng).matrix();
            let lhs = phi.apply(&m.matmul(&n), 1e-9).unwrap();
            let rhs = phi.apply(&m, 1e-12).unwrap() * phi.apply(&n, 1e-12).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tarbard_ideal_annihilated() {
        let d = 6;
        let order = 2;
        // S^order times anything in the model has phi = 0
        let mut s2 = CMatrix::zeros(d, d);
        for i in 0..d - order {
            s2[(i, i + order)] = c(1.0);
        }
        let phi = MultiplicativeFunctional::TarbardLeading { order };
        assert_eq!(phi.apply(&s2, 1e-12).unwrap(), c(0.0));
        let mut any = CMatrix::identity(d).scale(c(4.0));
        any[(0, 1)] = c(1.0);
        for i in 1..d - 1 {
            any[(i, i + 1)] = c(1.0);
        }
        assert_eq!(phi.apply(&s2.matmul(&any), 1e-12).unwrap(), c(0.0));
    }

    #[test]
    fn tarbard_rejects_bad_band() {
        let d = 5;
        let mut m = CMatrix::identity(d);
        m[(0, 1)] = c(1.0); // superdiagonal 1 not constant
        assert!(tarbard_decompose(&m, 2, 1e-12).is_err());
        assert!(tarbard_decompose(&m, 0, 1e-12).is_err());
        assert!(tarbard_decompose(&m, d, 1e-12).is_err());
    }

    #[test]
    fn ideal_contrast_full_side_obstructed() {
        let d = 8;
        let tr = Truncation::bilinear(d);
        let k = materialize(
            &OperatorSpec::BackwardShift { weights: uniform_weights(d - 1) },
            &tr,
        )
        .unwrap();
        let cfg = HccConfig {
            schedule: vec![1, 2, 4, 8],
            curve_floor: 1e-2,
            ..HccConfig::default()
        };
        let out = ideal_contrast_scenario(c(1.0), &k, &cfg, 1e-10).unwrap();
        assert_eq!(out.full_report.verdict(), Verdict::Obstructed);
        assert!((out.functional_eigenvalue - c(1.0)).norm() < 1e-14);
        assert_eq!(out.ideal_report.verdict(), Verdict::EvidenceFor);
    }

    #[test]
    fn ideal_contrast_scalar_cases() {
        let d = 6;
        let k0 = CMatrix::zeros(d, d);
        let cfg = HccConfig::default();
        // K = 0: the ideal-side operator is scalar, never evidence-for
        let out = ideal_contrast_scenario(c(1.0), &k0, &cfg, 1e-10).unwrap();
        assert_eq!(out.ideal_report.verdict(), Verdict::Inconclusive);
        // lambda = 0 with K = 0: eigenvalue 0
        let out = ideal_contrast_scenario(c(0.0), &k0, &cfg, 1e-10).unwrap();
        assert_eq!(out.functional_eigenvalue, c(0.0));
    }

    #[test]
    fn commutator_ignores_scalar_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        for _ in 0..10 {
            let elem = random_ah(6, &mut rng);
            let out = commutator_model_check(&elem).unwrap();
            assert_eq!(out.lift_gap, 0.0);
            assert_eq!(out.report.verdict(), Verdict::Obstructed);
        }
    }

    #[test]
    fn commutator_of_scalar_is_zero() {
        let elem = AhModelElement { lambda: c(2.5), k: CMatrix::zeros(4, 4) };
        let out = commutator_model_check(&elem).unwrap();
        assert_eq!(out.lift_gap, 0.0);
        let a = elem.matrix();
        let delta = ElementaryOp::commutator(a).unwrap();
        assert_eq!(delta.kron_lift().unwrap().matrix.max_abs(), 0.0);
    }
}
