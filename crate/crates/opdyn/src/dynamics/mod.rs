//! Orbits and hypercyclicity evidence/obstruction probes.

pub mod ebs;
pub mod hcc;
pub mod obstructions;
pub mod orbit;
pub mod probe;
pub mod transitivity;

pub use ebs::{ebs_subspace, EbsOutcome};
pub use hcc::{hcc_probe, HccConfig, HccOutcome, HccWitness, HccWitnessFamily};
pub use obstructions::{
    is_riesz_model, kitai_check, point_spectrum_obstruction, riesz_classify,
    supercyclicity_obstruction, PointSpectrumOutcome, RieszOutcome,
};
pub use orbit::{orbit, Orbit, OrbitPoint, OVERFLOW_GUARD, UNDERFLOW_FLUSH};
pub use probe::{Certificate, ProbeReport, ProbeStep, Verdict};
pub use transitivity::{
    transitivity_probe, TRANSITIVITY_NEGATIVE_FLOOR, TRANSITIVITY_POSITIVE_THRESHOLD,
};
