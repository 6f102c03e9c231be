//! Elementary operators `E_{A,B} = sum_j L_{A_j} R_{B_j}`, generalised
//! derivations and commutators: application, Kronecker lift, spectra,
//! adjoints, bijectivity and conjugation.
//!
//! The vec convention is column-stacking throughout: `L_A` lifts to
//! `I (x) A` and `R_B` lifts to `B^T (x) I`, so that
//! `lift(E) . vec(T) = vec(E(T))`. The convention is asserted by the
//! `selftest` CLI subcommand and by unit tests here.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{OpdynError, Result};
use crate::numlin::{eigenvalues, svd, vec_norm, CMatrix, Lu};
use crate::spectra::{hausdorff, spectrum_report, SpectrumReport};

/// Cap on the lifted dimension d^2.
pub const LIFT_DIM_CAP: usize = 1024;

/// Ordered list of coefficient pairs `(A_j, B_j)`, all square of equal
/// dimension.
#[derive(Debug, Clone)]
pub struct ElementaryOp {
    pairs: Vec<(CMatrix, CMatrix)>,
    dim: usize,
}

/// Kronecker-lifted matrix of an elementary operator, column-stacking
/// convention.
#[derive(Debug, Clone)]
pub struct KroneckerLift {
    pub matrix: CMatrix,
    pub base_dim: usize,
}

impl ElementaryOp {
    pub fn new(pairs: Vec<(CMatrix, CMatrix)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(OpdynError::Specification(
                "elementary operator needs at least one coefficient pair".into(),
            ));
        }
        let dim = pairs[0].0.require_square()?;
        for (a, b) in &pairs {
            if a.require_square()? != dim || b.require_square()? != dim {
                return Err(OpdynError::Dimension(
                    "all elementary operator factors must share one dimension".into(),
                ));
            }
        }
        Ok(ElementaryOp { pairs, dim })
    }

    /// Generalised derivation `tau_{A,B}(T) = AT - TB`, canonical pair
    /// order `[(A, I), (I, -B)]`.
    pub fn derivation(a: CMatrix, b: CMatrix) -> Result<Self> {
        let d = a.require_square()?;
        if b.require_square()? != d {
            return Err(OpdynError::Dimension(
                "derivation factors must share one dimension".into(),
            ));
        }
        let id = CMatrix::identity(d);
        let neg_b = b.scale(C64::new(-1.0, 0.0));
        Self::new(vec![(a, id.clone()), (id, neg_b)])
    }

    /// Commutator map `Delta_A = tau_{A,A}`.
    pub fn commutator(a: CMatrix) -> Result<Self> {
        Self::derivation(a.clone(), a)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[(CMatrix, CMatrix)] {
        &self.pairs
    }

    /// Recover `(A, B)` when this operator was built in the canonical
    /// derivation shape `[(A, I), (I, -B)]`.
    pub fn as_derivation(&self) -> Option<(CMatrix, CMatrix)> {
        if self.pairs.len() != 2 {
            return None;
        }
        let id = CMatrix::identity(self.dim);
        let (ref a, ref i0) = self.pairs[0];
        let (ref i1, ref nb) = self.pairs[1];
        if i0.approx_eq(&id, 0.0) && i1.approx_eq(&id, 0.0) {
            Some((a.clone(), nb.scale(C64::new(-1.0, 0.0))))
        } else {
            None
        }
    }

    /// `E(T) = sum_j A_j T B_j`.
    pub fn apply(&self, t: &CMatrix) -> Result<CMatrix> {
        if t.rows() != self.dim || t.cols() != self.dim {
            return Err(OpdynError::Dimension(format!(
                "operand is {}x{} but factors are {}x{}",
                t.rows(),
                t.cols(),
                self.dim,
                self.dim
            )));
        }
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (a, b) in &self.pairs {
            out = out.add(&a.matmul(t).matmul(b));
        }
        Ok(out)
    }

    fn check_lift_cap(&self) -> Result<()> {
        if self.dim * self.dim > LIFT_DIM_CAP {
            return Err(OpdynError::CapExceeded(format!(
                "lift dimension {} exceeds cap {LIFT_DIM_CAP}",
                self.dim * self.dim
            )));
        }
        Ok(())
    }

    /// Kronecker lift `sum_j B_j^T (x) A_j`.
    pub fn kron_lift(&self) -> Result<KroneckerLift> {
        self.check_lift_cap()?;
        let n = self.dim * self.dim;
        let mut m = CMatrix::zeros(n, n);
        for (a, b) in &self.pairs {
            m = m.add(&b.transpose().kron(a));
        }
        Ok(KroneckerLift {
            matrix: m,
            base_dim: self.dim,
        })
    }

    /// Lift of the adjoint with respect to the trace pairing
    /// `<phi_N, T> = tr(T N)`. The adjoint acts as `N -> sum_j B_j N A_j`,
    /// which lifts to `sum_j A_j^T (x) B_j` under column stacking.
    pub fn adjoint_lift(&self) -> Result<KroneckerLift> {
        self.check_lift_cap()?;
        let n = self.dim * self.dim;
        let mut m = CMatrix::zeros(n, n);
        for (a, b) in &self.pairs {
            m = m.add(&a.transpose().kron(b));
        }
        Ok(KroneckerLift {
            matrix: m,
            base_dim: self.dim,
        })
    }

    /// Adjoint action `E^*(N) = sum_j B_j N A_j` applied directly.
    pub fn adjoint_apply(&self, n: &CMatrix) -> Result<CMatrix> {
        if n.rows() != self.dim || n.cols() != self.dim {
            return Err(OpdynError::Dimension("adjoint operand dimension mismatch".into()));
        }
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (a, b) in &self.pairs {
            out = out.add(&b.matmul(n).matmul(a));
        }
        Ok(out)
    }

    /// Spectrum of the Kronecker lift, eps-clustered, with the
    /// difference-set cross check for derivation instances.
    pub fn spectrum(&self, eps: Option<f64>) -> Result<SpectrumReport> {
        let lift = self.kron_lift()?;
        let evs = eigenvalues(&lift.matrix)?;
        let eps = eps.unwrap_or_else(|| crate::spectra::default_eps(&evs));
        let mut report = spectrum_report(evs, eps, eps);
        if let Some((a, b)) = self.as_derivation() {
            let ea = eigenvalues(&a)?;
            let eb = eigenvalues(&b)?;
            let mut diff = Vec::with_capacity(ea.len() * eb.len());
            for x in &ea {
                for y in &eb {
                    diff.push(x - y);
                }
            }
            report.hausdorff_to_difference_set =
                Some(hausdorff(&report.eigenvalues, &diff));
            report.difference_set = Some(diff);
        }
        Ok(report)
    }
}

/// Certificate produced by the common-eigenvector obstruction for tuples.
#[derive(Debug, Clone)]
pub struct TupleObstruction {
    pub eigenvalue: C64,
    pub residual: f64,
    pub obstructed: bool,
    /// Rayleigh-quotient eigenvalue estimates per factor.
    pub alphas: Vec<C64>,
    pub betas: Vec<C64>,
}

/// Adjoint-eigenvector obstruction for an n-tuple elementary operator:
/// with `A_j^T x* ~ alpha_j x*` and `B_j x ~ beta_j x`, the functional
/// `phi(T) = <x*, T x>` is an approximate eigenvector of `E^*` with
/// eigenvalue `sum alpha_j beta_j`.
///
/// Per-factor eigenvalues are extracted as Rayleigh quotients against the
/// supplied witness vectors because truncated shifts are nilpotent and
/// an eigensolver would collapse their spectra to {0}.
pub fn tuple_eigen_obstruction(
    a_tuple: &[CMatrix],
    b_tuple: &[CMatrix],
    xstar: &[C64],
    x: &[C64],
    tol: f64,
) -> Result<TupleObstruction> {
    if a_tuple.len() != b_tuple.len() || a_tuple.is_empty() {
        return Err(OpdynError::Specification(
            "tuples must be nonempty and of equal length".into(),
        ));
    }
    if vec_norm(xstar) == 0.0 || vec_norm(x) == 0.0 {
        return Err(OpdynError::Domain("witness vectors must be nonzero".into()));
    }
    let d = a_tuple[0].require_square()?;
    let xs_sq = crate::numlin::vec_dot(xstar, xstar);
    let x_sq = crate::numlin::vec_dot(x, x);
    let mut alphas = Vec::with_capacity(a_tuple.len());
    let mut betas = Vec::with_capacity(b_tuple.len());
    for (a, b) in a_tuple.iter().zip(b_tuple) {
        if a.require_square()? != d || b.require_square()? != d {
            return Err(OpdynError::Dimension("tuple factor dimension mismatch".into()));
        }
        alphas.push(crate::numlin::vec_dot(&a.transpose().matvec(xstar), xstar) / xs_sq);
        betas.push(crate::numlin::vec_dot(&b.matvec(x), x) / x_sq);
    }
    let eigenvalue: C64 = alphas.iter().zip(&betas).map(|(a, b)| a * b).sum();

    // Replay the certificate through the adjoint action on N = x x*^T.
    let pairs: Vec<(CMatrix, CMatrix)> = a_tuple
        .iter()
        .cloned()
        .zip(b_tuple.iter().cloned())
        .collect();
    let e = ElementaryOp::new(pairs)?;
    let n = CMatrix::outer(x, xstar);
    let image = e.adjoint_apply(&n)?;
    let residual =
        image.sub(&n.scale(eigenvalue)).frobenius_norm() / n.frobenius_norm();
    Ok(TupleObstruction {
        eigenvalue,
        residual,
        obstructed: residual <= tol,
        alphas,
        betas,
    })
}

/// Finite-dimensional injectivity/surjectivity analogue of the
/// dense-range duality for generalised derivations.
///
/// At truncation the infinite-dimensional C_1 / C_infty distinction
/// collapses: injectivity, surjectivity and a positive spectral gap all
/// coincide, which the report states explicitly.
#[derive(Debug, Clone)]
pub struct BijectivityReport {
    pub injective: bool,
    pub surjective: bool,
    /// `min |alpha - beta|` over `eig(A) x eig(B)`.
    pub spectral_gap: f64,
    pub lift_rank: usize,
    pub lift_dim: usize,
    pub finite_dim_collapse: &'static str,
}

pub fn bijectivity_report(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<BijectivityReport> {
    let e = ElementaryOp::derivation(a.clone(), b.clone())?;
    let lift = e.kron_lift()?;
    let dec = svd(&lift.matrix)?;
    let lift_dim = lift.matrix.rows();
    let lift_rank = dec.rank(tol);
    let ea = eigenvalues(a)?;
    let eb = eigenvalues(b)?;
    let mut gap = f64::INFINITY;
    for x in &ea {
        for y in &eb {
            gap = gap.min((x - y).norm());
        }
    }
    let injective = lift_rank == lift_dim;
    Ok(BijectivityReport {
        injective,
        surjective: injective,
        spectral_gap: gap,
        lift_rank,
        lift_dim,
        finite_dim_collapse:
            "at truncation injectivity, surjectivity and spectral gap > 0 coincide",
    })
}

/// Outcome of conjugating a derivation by invertible `U`, `V`.
#[derive(Debug, Clone)]
pub struct ConjugationOutcome {
    pub op: ElementaryOp,
    /// Worst commutation defect of the intertwining diagram over the
    /// seeded test set.
    pub diagram_residual: f64,
    pub cond_u: f64,
    pub cond_v: f64,
}

/// Build `tau_{U^-1 A U, V B V^-1}` and verify that `L_{U^-1} R_{V^-1}`
/// intertwines it with `tau_{A,B}` on a seeded test set.
pub fn conjugate(
    a: &CMatrix,
    b: &CMatrix,
    u: &CMatrix,
    v: &CMatrix,
    seed: u64,
) -> Result<ConjugationOutcome> {
    let d = a.require_square()?;
    let cond = |m: &CMatrix| -> Result<f64> {
        let sv = svd(m)?.singular_values;
        let smax = sv.first().copied().unwrap_or(0.0);
        let smin = sv.last().copied().unwrap_or(0.0);
        if smin <= smax * 1e-14 {
            return Err(OpdynError::Singular(
                "conjugation requires invertible U and V".into(),
            ));
        }
        Ok(smax / smin)
    };
    let cond_u = cond(u)?;
    let cond_v = cond(v)?;
    let u_inv = Lu::new(u)?.inverse();
    let v_inv = Lu::new(v)?.inverse();

    let original = ElementaryOp::derivation(a.clone(), b.clone())?;
    let conjugated = ElementaryOp::derivation(
        u_inv.matmul(a).matmul(u),
        v.matmul(b).matmul(&v_inv),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let t = CMatrix::random(d, d, &mut rng);
        let lhs = u_inv.matmul(&original.apply(&t)?).matmul(&v_inv);
        let rhs = conjugated.apply(&u_inv.matmul(&t).matmul(&v_inv))?;
        let defect = lhs.sub(&rhs).frobenius_norm() / t.frobenius_norm().max(1.0);
        worst = worst.max(defect);
    }
    Ok(ConjugationOutcome {
        op: conjugated,
        diagram_residual: worst,
        cond_u,
        cond_v,
    })
}
