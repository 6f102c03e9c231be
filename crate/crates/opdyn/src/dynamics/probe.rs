//! Probe report plumbing shared by every dynamics procedure.
//!
//! The one structural rule, enforced by construction: a verdict of
//! `Obstructed` can only be set together with a certificate.

use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    EvidenceFor,
    Obstructed,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::EvidenceFor => "evidence-for",
            Verdict::Obstructed => "obstructed",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Evidence backing an `Obstructed` verdict.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub kind: String,
    pub eigenvalue: Option<C64>,
    pub residual: Option<f64>,
    /// Spectral component witnessing a unit-circle obstruction.
    pub component: Option<Vec<C64>>,
    pub detail: String,
}

impl Certificate {
    pub fn eigenpair(eigenvalue: C64, residual: f64, detail: impl Into<String>) -> Self {
        Certificate {
            kind: "eigenpair".into(),
            eigenvalue: Some(eigenvalue),
            residual: Some(residual),
            component: None,
            detail: detail.into(),
        }
    }

    pub fn spectral_component(points: Vec<C64>, detail: impl Into<String>) -> Self {
        Certificate {
            kind: "spectral-component".into(),
            eigenvalue: None,
            residual: None,
            component: Some(points),
            detail: detail.into(),
        }
    }
}

/// One schedule step of a probe.
#[derive(Debug, Clone, Copy)]
pub struct ProbeStep {
    pub n: u64,
    pub score: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub probe: String,
    pub steps: Vec<ProbeStep>,
    verdict: Verdict,
    certificate: Option<Certificate>,
    /// Echo of tolerances, budgets and seeds, in insertion order.
    pub params: Vec<(String, String)>,
    /// Overflow/underflow and skipped-step markers; never silent.
    pub flags: Vec<String>,
    /// Always true: orbit density is not decidable at truncation.
    pub truncation_evidence_only: bool,
}

impl ProbeReport {
    pub fn new(probe: impl Into<String>) -> Self {
        ProbeReport {
            probe: probe.into(),
            steps: Vec::new(),
            verdict: Verdict::Inconclusive,
            certificate: None,
            params: Vec::new(),
            flags: Vec::new(),
            truncation_evidence_only: true,
        }
    }

    pub fn param(&mut self, key: impl Into<String>, value: impl ToString) {
        self.params.push((key.into(), value.to_string()));
    }

    pub fn flag(&mut self, note: impl Into<String>) {
        self.flags.push(note.into());
    }

    /// Steps must arrive in increasing n; enforced here so every report
    /// satisfies the sortedness invariant by construction.
    pub fn push_step(&mut self, step: ProbeStep) {
        if let Some(last) = self.steps.last() {
            assert!(step.n > last.n, "probe steps must be pushed in increasing n");
        }
        self.steps.push(step);
    }

    pub fn mark_evidence_for(&mut self) {
        self.verdict = Verdict::EvidenceFor;
    }

    pub fn mark_obstructed(&mut self, certificate: Certificate) {
        self.certificate = Some(certificate);
        self.verdict = Verdict::Obstructed;
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    pub fn min_score(&self) -> Option<f64> {
        self.steps
            .iter()
            .map(|s| s.score)
            .min_by(f64::total_cmp)
    }
}
