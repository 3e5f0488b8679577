//! Exact existence solvers and flow numbers.

pub mod lp;
pub mod numbers;
pub mod search;
pub mod two_flow;

pub use numbers::{circular_flow_number, circular_flow_number_with, integer_flow_number, integer_flow_number_with, FlowNumbers};
pub use search::{find_flow_with_domains, find_nz_k_flow, find_nz_k_flow_with, find_nz_zk_flow, find_nz_zk_flow_with};
pub use two_flow::{find_2_flow_on_even_graph, signed_circuit_flow};
