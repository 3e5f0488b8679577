//! Structural predicates: signed circuits, barbells, admissibility, star-cuts
//! and cubic colorability.

pub mod admissible;
pub mod barbell;
pub mod circuit;
pub mod cubic;

pub use admissible::{has_star_cut, is_antibalanced, is_flow_admissible, AdmissibilityReason, AdmissibilityVerdict, StarCut};
pub use barbell::{find_long_barbell, find_long_barbell_with};
pub use circuit::{classify_signed_circuit, enumerate_circuits, find_signed_circuit_in, Circuit, SignedCircuitKind, SignedCircuitWitness};
pub use cubic::{find_antibalanced_2_factor, three_edge_coloring};
