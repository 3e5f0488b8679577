//! Long-barbell search.

use crate::balance::{is_balanced_masked, BalanceCertificate};
use crate::error::Result;
use crate::graph::SignedGraph;
use crate::limits::Limits;
use crate::structure::circuit::{enumerate_circuits, Circuit, SignedCircuitKind, SignedCircuitWitness};

/// A long barbell of `g`, if one exists.
pub fn find_long_barbell(g: &SignedGraph) -> Result<Option<SignedCircuitWitness>> {
    find_long_barbell_with(g, Limits::global())
}

/// Tries every unbalanced circuit `C` (shortest first) and looks for an
/// unbalanced circuit in the same component after deleting `V(C)`. Two such
/// circuits are joined by a shortest path between them.
pub fn find_long_barbell_with(g: &SignedGraph, limits: &Limits) -> Result<Option<SignedCircuitWitness>> {
    let comp = g.component_map();
    for component in g.connected_components() {
        let cid = comp[component[0]];
        let in_comp = |e: usize| comp[g.edge(e).ends[0]] == cid;
        if is_balanced_masked(g, &in_comp).is_balanced() {
            continue;
        }
        let circuits = enumerate_circuits(g, &in_comp, limits.circuits)?;
        for c in circuits.iter().filter(|c| !c.is_balanced(g)) {
            let mut on_c = vec![false; g.num_vertices()];
            for &v in &c.vertices {
                on_c[v] = true;
            }
            let rest = |e: usize| {
                let [u, v] = g.edge(e).ends;
                in_comp(e) && !on_c[u] && !on_c[v]
            };
            if let BalanceCertificate::Unbalanced { circuit } = is_balanced_masked(g, rest) {
                let other = Circuit::from_edges(g, &circuit).expect("balance witness is a circuit");
                let (path, start, _) = g
                    .shortest_path_between(&c.vertices, &other.vertices, &in_comp)
                    .expect("circuits lie in one component");
                let first = rotate_to(c, start);
                return Ok(Some(SignedCircuitWitness {
                    kind: SignedCircuitKind::LongBarbell,
                    circuits: vec![first.edges, other.edges],
                    path,
                }));
            }
        }
    }
    Ok(None)
}

/// The same circuit traversed from vertex `v`.
fn rotate_to(c: &Circuit, v: usize) -> Circuit {
    let i = c.vertices.iter().position(|&w| w == v).unwrap_or(0);
    let mut edges = c.edges.clone();
    let mut vertices = c.vertices.clone();
    edges.rotate_left(i);
    vertices.rotate_left(i);
    Circuit { edges, vertices }
}
