//! Exact flow computations on signed graphs.
//!
//! Graphs are half-edge multigraphs with loops and parallel edges. Flow values
//! are exact rationals throughout. Exhaustive searches distinguish a proven
//! negative answer (`Ok(None)`) from running out of budget
//! ([`Error::ResourceCap`]).

pub mod balance;
pub mod certificate;
pub mod corpus;
pub mod error;
pub mod flow;
pub mod flowfile;
pub mod graph;
pub mod harness;
pub mod limits;
pub mod orientation;
pub mod solve;
pub mod structure;
pub mod transform;

pub use balance::{find_unbalanced_circuit, is_balanced, switching_equivalent, switching_normal_form, BalanceCertificate};
pub use error::{Error, Result};
pub use flow::{boundary, check_flow, FlowAssignment, FlowKind, Rational, Violation};
pub use graph::{Edge, End, HalfEdge, Sign, SignedGraph};
pub use limits::Limits;
pub use orientation::{switch_orientation, Orientation};
