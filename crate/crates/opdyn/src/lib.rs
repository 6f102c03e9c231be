//! opdyn: a desk-scale numerical laboratory for the dynamics of
//! elementary operators, generalised derivations and commutators on
//! truncated operator spaces.
//!
//! The crate materializes symbolic operator specifications as dense
//! complex matrices, lifts elementary operators to Kronecker form, and
//! runs evidence/obstruction probes for hypercyclicity-style behaviour.
//! Everything is deterministic given a configuration and a seed; orbit
//! density itself is not decidable at truncation, so probe reports carry
//! an explicit truncation-evidence-only flag.

pub mod algebras;
pub mod dynamics;
pub mod elementary;
pub mod error;
pub mod hilbert;
pub mod numlin;
pub mod opmodel;
pub mod scenario;
pub mod spectra;

pub use error::{OpdynError, Result};
