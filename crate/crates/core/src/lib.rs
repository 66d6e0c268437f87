//! Discrimination of two-qubit unitaries that differ only in their entangling
//! part: canonical decomposition, optimal probe construction on the unit
//! circle, and brute-force cross-checks.

pub mod canonical;
pub mod discrimination;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod oracle;
pub mod sampling;

pub use canonical::{
    build_ud, extract_interaction, relative_phases, GateClass, Interaction, InteractionVector, PhaseSet,
};
pub use discrimination::{
    discriminate, discriminate_with, error_probability, fidelity, perfectly_distinguishable, DiscriminationReport,
    HullCase, ProbeConstruction, ProbeState, Tolerances,
};
pub use error::{Error, Result};
pub use geometry::{hull_of_phases, HullResult, Point};
pub use numerics::{Mat2, Mat4, Vec4, C64};
pub use oracle::{SearchConfig, ShotOutcome};
