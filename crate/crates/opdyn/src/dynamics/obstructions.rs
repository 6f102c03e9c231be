//! Spectral and point-spectrum obstructions to hypercyclicity and
//! supercyclicity, plus the Riesz-pair classifier.

use num_complex::Complex64 as C64;

use crate::elementary::ElementaryOp;
use crate::error::Result;
use crate::numlin::{eigenvalues, vec_norm, vec_scale, vec_sub, CMatrix};
use crate::opmodel::{
    materialize, weighted_shift_eigenvector, OperatorSpec, Truncation,
};
use crate::spectra::{spectrum_report, SpectrumReport};

use super::probe::{Certificate, ProbeReport};

/// Unit-circle check: a hypercyclic operator cannot have a spectral
/// component staying clear of the unit circle.
pub fn kitai_check(spectrum: &SpectrumReport, eps: f64) -> ProbeReport {
    let reclustered = spectrum_report(spectrum.eigenvalues.clone(), eps, eps);
    let mut report = ProbeReport::new("kitai");
    report.param("eps", eps);
    report.param("components", reclustered.components.len());
    if let Some(ci) = reclustered.obstructed_component {
        report.mark_obstructed(Certificate::spectral_component(
            reclustered.components[ci].clone(),
            "spectral component with every point off the unit circle",
        ));
    }
    report
}

/// Default eigenvalue used when a shift witness calls for a point inside
/// the unit disc.
const WITNESS_MU: C64 = C64 { re: 0.5, im: 0.0 };

/// Candidate eigenvector for `materialize(spec)` itself; `None` when the
/// model operator has empty point spectrum (nilpotency introduced purely
/// by truncation is deliberately rejected, e.g. the forward shift).
fn direct_witness(spec: &OperatorSpec, t: &Truncation) -> Option<(Vec<C64>, C64)> {
    let d = t.dimension;
    match spec {
        OperatorSpec::BackwardShift { weights } => Some((
            weighted_shift_eigenvector(WITNESS_MU, weights, d).ok()?,
            WITNESS_MU,
        )),
        // the dyadic shift has a genuine kernel: odd coordinates
        OperatorSpec::EvenShift { .. } => {
            Some((crate::numlin::unit_vector(d, 0), C64::new(0.0, 0.0)))
        }
        OperatorSpec::Diagonal { entries } => {
            Some((crate::numlin::unit_vector(d, 0), *entries.first()?))
        }
        OperatorSpec::Identity => Some((crate::numlin::unit_vector(d, 0), C64::new(1.0, 0.0))),
        OperatorSpec::Zero => Some((crate::numlin::unit_vector(d, 0), C64::new(0.0, 0.0))),
        OperatorSpec::RankOne { functional, vector } => {
            let beta = crate::numlin::vec_pair(&functional[..d], &vector[..d]);
            Some((vector[..d].to_vec(), beta))
        }
        OperatorSpec::Sum(terms) => sum_witness(terms, t, direct_witness),
        OperatorSpec::Power(inner, k) => {
            let (v, b) = direct_witness(inner, t)?;
            Some((v, b.powu(*k)))
        }
        OperatorSpec::Exp(inner) => {
            let (v, b) = direct_witness(inner, t)?;
            Some((v, b.exp()))
        }
        OperatorSpec::ExpMinusI(inner) => {
            let (v, b) = direct_witness(inner, t)?;
            Some((v, b.exp() - C64::new(1.0, 0.0)))
        }
        OperatorSpec::Transpose(inner) => transpose_witness(inner, t),
        OperatorSpec::ForwardShift { .. } | OperatorSpec::ScalarPlusNilpotent { .. } => None,
    }
}

/// Candidate eigenvector for the transpose of `materialize(spec)`.
fn transpose_witness(spec: &OperatorSpec, t: &Truncation) -> Option<(Vec<C64>, C64)> {
    let d = t.dimension;
    match spec {
        // the transpose of a forward shift acts as a weighted backward
        // shift, whose point spectrum fills a disc
        OperatorSpec::ForwardShift { weights } => Some((
            weighted_shift_eigenvector(WITNESS_MU, weights, d).ok()?,
            WITNESS_MU,
        )),
        // transpose of a backward shift is a forward shift: empty point
        // spectrum in the model
        OperatorSpec::BackwardShift { .. } | OperatorSpec::EvenShift { .. } => None,
        OperatorSpec::Diagonal { .. }
        | OperatorSpec::Identity
        | OperatorSpec::Zero => direct_witness(spec, t),
        OperatorSpec::RankOne { functional, vector } => {
            let alpha = crate::numlin::vec_pair(&functional[..d], &vector[..d]);
            Some((functional[..d].to_vec(), alpha))
        }
        OperatorSpec::Sum(terms) => sum_witness(terms, t, transpose_witness),
        OperatorSpec::Power(inner, k) => {
            let (v, a) = transpose_witness(inner, t)?;
            Some((v, a.powu(*k)))
        }
        OperatorSpec::Exp(inner) => {
            let (v, a) = transpose_witness(inner, t)?;
            Some((v, a.exp()))
        }
        OperatorSpec::ExpMinusI(inner) => {
            let (v, a) = transpose_witness(inner, t)?;
            Some((v, a.exp() - C64::new(1.0, 0.0)))
        }
        OperatorSpec::Transpose(inner) => direct_witness(inner, t),
        OperatorSpec::ScalarPlusNilpotent { .. } => None,
    }
}

/// Witness for a linear combination: scalar terms (identity, zero)
/// accept any vector, so a single non-scalar term with a witness
/// determines the whole sum.
fn sum_witness(
    terms: &[(C64, OperatorSpec)],
    t: &Truncation,
    table: fn(&OperatorSpec, &Truncation) -> Option<(Vec<C64>, C64)>,
) -> Option<(Vec<C64>, C64)> {
    let mut scalar_part = C64::new(0.0, 0.0);
    let mut carrier: Option<(Vec<C64>, C64)> = None;
    for (coeff, term) in terms {
        match term {
            OperatorSpec::Identity => scalar_part += coeff,
            OperatorSpec::Zero => {}
            other => {
                let (v, lam) = table(other, t)?;
                if carrier.is_some() {
                    return None; // two non-scalar terms: no shared witness
                }
                carrier = Some((v, coeff * lam));
            }
        }
    }
    match carrier {
        Some((v, lam)) => Some((v, lam + scalar_part)),
        None => Some((crate::numlin::unit_vector(t.dimension, 0), scalar_part)),
    }
}

#[derive(Debug, Clone)]
pub struct PointSpectrumOutcome {
    pub report: ProbeReport,
    /// `(x*, alpha)` with `A^T x* ~ alpha x*`, if found.
    pub left: Option<(Vec<C64>, C64, f64)>,
    /// `(x, beta)` with `B x ~ beta x`, if found.
    pub right: Option<(Vec<C64>, C64, f64)>,
}

/// If both `sigma_p(A*)` and `sigma_p(B)` are nonempty, the derivation
/// `tau_{A,B}` has the adjoint eigenvalue `alpha - beta` and cannot be
/// hypercyclic. Witnesses come from a structural table over the specs;
/// both are certified numerically and replayed through the adjoint lift.
pub fn point_spectrum_obstruction(
    spec_a: &OperatorSpec,
    spec_b: &OperatorSpec,
    trunc: &Truncation,
    tol: f64,
) -> Result<PointSpectrumOutcome> {
    let a = materialize(spec_a, trunc)?;
    let b = materialize(spec_b, trunc)?;
    let mut report = ProbeReport::new("point-spectrum");
    report.param("tol", tol);

    let certify = |m: &CMatrix, w: Option<(Vec<C64>, C64)>| -> Option<(Vec<C64>, C64, f64)> {
        let (v, lam) = w?;
        let res = vec_norm(&vec_sub(&m.matvec(&v), &vec_scale(&v, lam))) / vec_norm(&v);
        Some((v, lam, res))
    };
    let left = certify(&a.transpose(), transpose_witness(spec_a, trunc));
    let right = certify(&b, direct_witness(spec_b, trunc));

    match (&left, &right) {
        (Some((xstar, alpha, ra)), Some((x, beta, rb))) if *ra <= tol && *rb <= tol => {
            report.param("alpha", alpha);
            report.param("beta", beta);
            report.param("left_residual", ra);
            report.param("right_residual", rb);
            // replay: N = x x*^T is an approximate eigenvector of the
            // adjoint N -> N A - B N at alpha - beta
            let e = ElementaryOp::derivation(a.clone(), b.clone())?;
            let n = CMatrix::outer(x, xstar);
            let lam = alpha - beta;
            let replay = e
                .adjoint_apply(&n)?
                .sub(&n.scale(lam))
                .frobenius_norm()
                / n.frobenius_norm();
            report.param("replay_residual", replay);
            if replay <= 10.0 * tol {
                report.mark_obstructed(Certificate::eigenpair(
                    lam,
                    replay,
                    "adjoint eigenvalue from factor point spectra",
                ));
            } else {
                report.flag("replay through the adjoint action exceeded 10x tol");
            }
        }
        _ => {
            report.flag("no certified witness pair in the structural table");
        }
    }
    Ok(PointSpectrumOutcome { report, left, right })
}

/// A supercyclic operator's adjoint has at most one eigenvalue, and that
/// one must be nonzero. Input: certified adjoint eigenvalues with their
/// residuals.
pub fn supercyclicity_obstruction(eigenpairs: &[(C64, f64)], tol: f64) -> ProbeReport {
    let mut report = ProbeReport::new("supercyclicity");
    report.param("tol", tol);
    let certified: Vec<C64> = eigenpairs
        .iter()
        .filter(|(_, r)| *r <= tol)
        .map(|(z, _)| *z)
        .collect();
    report.param("certified", certified.len());
    for (i, zi) in certified.iter().enumerate() {
        for zj in &certified[i + 1..] {
            if (zi - zj).norm() > tol {
                report.mark_obstructed(Certificate::eigenpair(
                    *zi,
                    0.0,
                    format!("two distinct adjoint eigenvalues {zi} and {zj}"),
                ));
                return report;
            }
        }
    }
    if let Some(z) = certified.iter().find(|z| z.norm() <= tol) {
        report.mark_obstructed(Certificate::eigenpair(
            *z,
            0.0,
            "adjoint eigenvalue zero",
        ));
    }
    report
}

/// Membership in the finite Riesz model family: compact-model specs
/// whose symbol decays like C/k (finite rank, vanishing weights or
/// diagonal entries, nilpotent scalar-plus-nilpotent).
pub fn is_riesz_model(spec: &OperatorSpec) -> bool {
    fn decays(seq: &[C64]) -> bool {
        let max = seq.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        seq.iter()
            .enumerate()
            .all(|(k, z)| z.norm() * (k + 1) as f64 <= 4.0 * max)
    }
    match spec {
        OperatorSpec::Zero | OperatorSpec::RankOne { .. } => true,
        OperatorSpec::Diagonal { entries } => decays(entries),
        OperatorSpec::BackwardShift { weights }
        | OperatorSpec::ForwardShift { weights }
        | OperatorSpec::EvenShift { weights } => decays(weights),
        OperatorSpec::ScalarPlusNilpotent { lambda, .. } => lambda.norm() == 0.0,
        OperatorSpec::Sum(terms) => terms.iter().all(|(_, s)| is_riesz_model(s)),
        OperatorSpec::Power(inner, k) => *k >= 1 && is_riesz_model(inner),
        OperatorSpec::Transpose(inner) => is_riesz_model(inner),
        OperatorSpec::Identity
        | OperatorSpec::Exp(_)
        | OperatorSpec::ExpMinusI(_) => false,
    }
}

#[derive(Debug, Clone)]
pub struct RieszOutcome {
    pub report: ProbeReport,
    pub difference_set: Vec<C64>,
}

/// For a Riesz pair the derivation spectrum is the discrete difference
/// set `sigma(A) - sigma(B)` with `{0}` as an isolated component, which
/// fails the unit-circle condition.
///
/// Zero is appended to each factor spectrum before differencing: it is
/// the guaranteed accumulation point of a Riesz operator's spectrum and
/// the one part hard truncation cannot see.
pub fn riesz_classify(
    spec_a: &OperatorSpec,
    spec_b: &OperatorSpec,
    trunc: &Truncation,
) -> Result<RieszOutcome> {
    let mut report = ProbeReport::new("riesz");
    if !is_riesz_model(spec_a) || !is_riesz_model(spec_b) {
        report.flag("factor outside the Riesz model family");
        return Ok(RieszOutcome { report, difference_set: Vec::new() });
    }
    let mut ea = eigenvalues(&materialize(spec_a, trunc)?)?;
    let mut eb = eigenvalues(&materialize(spec_b, trunc)?)?;
    ea.push(C64::new(0.0, 0.0));
    eb.push(C64::new(0.0, 0.0));
    let mut diff = Vec::with_capacity(ea.len() * eb.len());
    for x in &ea {
        for y in &eb {
            diff.push(x - y);
        }
    }
    let eps = 0.01;
    let margin = 0.1;
    let clustered = spectrum_report(diff.clone(), eps, margin);
    report.param("eps", eps);
    report.param("margin", margin);
    report.param("components", clustered.components.len());
    // locate the component holding 0
    let zero_component = clustered
        .components
        .iter()
        .position(|pts| pts.iter().any(|z| z.norm() < 1e-12));
    if let Some(ci) = zero_component {
        let pts = &clustered.components[ci];
        if pts.iter().all(|z| (z.norm() - 1.0).abs() > margin) {
            report.mark_obstructed(Certificate::spectral_component(
                pts.clone(),
                "isolated spectral component at zero, away from the unit circle",
            ));
        } else {
            report.flag("component at zero reaches the unit circle at this truncation");
        }
    }
    Ok(RieszOutcome { report, difference_set: diff })
}
