//! 2-flows from closed walks: even subgraphs and signed circuits.

use crate::error::{Error, Result};
use crate::flow::FlowAssignment;
use crate::graph::{End, HalfEdge, SignedGraph};
use crate::orientation::Orientation;
use crate::structure::circuit::{classify_signed_circuit, Circuit, SignedCircuitKind, SignedCircuitWitness};

/// One traversal of an edge, leaving through `departure`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Step {
    pub edge: usize,
    pub departure: End,
}

impl Step {
    /// Traversal of `edge` starting at vertex `from` (a loop leaves through
    /// its first end).
    pub fn from_vertex(g: &SignedGraph, edge: usize, from: usize) -> Step {
        let e = g.edge(edge);
        let departure = if e.ends[0] == from { End::First } else { End::Second };
        Step { edge, departure }
    }
}

/// Accumulates the values, under the canonical orientation, of the flow
/// that sends one unit along each step of a closed walk.
///
/// The walk starts with polarity `+1`; the departing half-edge takes the
/// current polarity, the arriving one `-sign·polarity`, and crossing a
/// negative edge flips the polarity. The walk closes consistently iff it
/// crosses an even number of negative edges.
pub(crate) fn closed_walk_values(g: &SignedGraph, walk: &[Step]) -> Vec<i64> {
    let canon = Orientation::canonical(g);
    let mut values = vec![0i64; g.num_edges()];
    let mut p = 1i64;
    for s in walk {
        let d = canon.dir(HalfEdge::new(s.edge, s.departure));
        values[s.edge] += p * d;
        p *= g.sign(s.edge).value();
    }
    debug_assert_eq!(p, 1, "closed walk must cross an even number of negative edges");
    values
}

/// An Euler circuit of the edges accepted by `allowed` in the component of
/// `start`, taking at every vertex the unused incident edge of smallest
/// position in the incidence list.
pub(crate) fn euler_circuit(g: &SignedGraph, start: usize, allowed: &dyn Fn(usize) -> bool) -> Vec<Step> {
    let mut used = vec![false; g.num_edges()];
    let mut ptr = vec![0usize; g.num_vertices()];
    let mut stack: Vec<(usize, Option<Step>)> = vec![(start, None)];
    let mut circuit = Vec::new();
    while let Some(&(v, _)) = stack.last() {
        let inc = g.half_edges_at(v);
        while ptr[v] < inc.len() && (used[inc[ptr[v]].edge] || !allowed(inc[ptr[v]].edge)) {
            ptr[v] += 1;
        }
        if ptr[v] < inc.len() {
            let e = inc[ptr[v]].edge;
            used[e] = true;
            let step = Step::from_vertex(g, e, v);
            stack.push((g.edge(e).opposite(v), Some(step)));
        } else {
            let (_, via) = stack.pop().unwrap();
            if let Some(step) = via {
                circuit.push(step);
            }
        }
    }
    circuit.reverse();
    circuit
}

/// Traversal of a circuit starting from vertex `from` (which must lie on it).
pub(crate) fn circuit_walk(g: &SignedGraph, c: &Circuit, from: usize) -> Vec<Step> {
    let i = c.vertices.iter().position(|&v| v == from).expect("vertex on circuit");
    (0..c.len())
        .map(|k| {
            let j = (i + k) % c.len();
            Step::from_vertex(g, c.edges[j], c.vertices[j])
        })
        .collect()
}

/// Values of a 2-flow supported on the edge set, or `None` unless every
/// component of the edge set is eulerian with an even number of negative
/// edges. Values are `±1` on the set and `0` elsewhere, under the
/// canonical orientation.
pub(crate) fn two_flow_on_edges(g: &SignedGraph, edges: &[usize]) -> Option<Vec<i64>> {
    let mut mask = vec![false; g.num_edges()];
    for &e in edges {
        mask[e] = true;
    }
    let (sub, map) = g.edge_subgraph(edges);
    if !sub.is_eulerian() {
        return None;
    }
    let mut values = vec![0i64; g.num_edges()];
    for comp in sub.connected_components() {
        let comp_edges: Vec<usize> = (0..sub.num_edges())
            .filter(|&e| comp.binary_search(&sub.edge(e).ends[0]).is_ok())
            .map(|e| map[e])
            .collect();
        if comp_edges.is_empty() {
            continue;
        }
        if comp_edges.iter().filter(|&&e| g.sign(e).is_negative()).count() % 2 == 1 {
            return None;
        }
        let start = g.edge(comp_edges[0]).ends[0];
        let walk = euler_circuit(g, start, &|e| mask[e]);
        debug_assert_eq!(walk.len(), comp_edges.len());
        for (e, v) in closed_walk_values(g, &walk).into_iter().enumerate() {
            values[e] += v;
        }
    }
    Some(values)
}

/// A nowhere-zero 2-flow, which exists iff every component is eulerian
/// with an even number of negative edges.
pub fn find_2_flow_on_even_graph(g: &SignedGraph) -> Option<FlowAssignment> {
    let all: Vec<usize> = (0..g.num_edges()).collect();
    let values = two_flow_on_edges(g, &all)?;
    Some(FlowAssignment::from_integers(Orientation::canonical(g), &values))
}

/// The flow carried by a signed circuit: `±1` on a balanced circuit or short
/// barbell; on a long barbell `±1` on the two circuits and `±2` on the path.
pub fn signed_circuit_flow(g: &SignedGraph, w: &SignedCircuitWitness) -> Result<FlowAssignment> {
    let fresh = classify_signed_circuit(g, &w.edges())
        .ok_or_else(|| Error::InvalidWitness("edge set is not a signed circuit".into()))?;
    if fresh.kind != w.kind {
        return Err(Error::InvalidWitness(format!("declared {:?}, found {:?}", w.kind, fresh.kind)));
    }
    let circuit = |edges: &[usize]| {
        Circuit::from_edges(g, edges).ok_or_else(|| Error::InvalidWitness("member is not a circuit".into()))
    };
    let walk = match fresh.kind {
        SignedCircuitKind::BalancedCircuit => {
            let c = circuit(&fresh.circuits[0])?;
            circuit_walk(g, &c, c.vertices[0])
        }
        SignedCircuitKind::ShortBarbell => {
            let c1 = circuit(&fresh.circuits[0])?;
            let c2 = circuit(&fresh.circuits[1])?;
            let meet = *c1.vertex_set().intersection(&c2.vertex_set()).next().expect("barbell meets");
            let mut walk = circuit_walk(g, &c1, meet);
            walk.extend(circuit_walk(g, &c2, meet));
            walk
        }
        SignedCircuitKind::LongBarbell => {
            let c1 = circuit(&fresh.circuits[0])?;
            let c2 = circuit(&fresh.circuits[1])?;
            let v1 = c1.vertex_set();
            // orient the path from c1 to c2
            let path = &fresh.path;
            let first = g.edge(path[0]);
            let a = if v1.contains(&first.ends[0]) { first.ends[0] } else { first.ends[1] };
            let mut forward = Vec::new();
            let mut cur = a;
            for &e in path {
                forward.push(Step::from_vertex(g, e, cur));
                cur = g.edge(e).opposite(cur);
            }
            let b = cur;
            let mut back = Vec::new();
            for &e in path.iter().rev() {
                back.push(Step::from_vertex(g, e, cur));
                cur = g.edge(e).opposite(cur);
            }
            let mut walk = forward;
            walk.extend(circuit_walk(g, &c2, b));
            walk.extend(back);
            walk.extend(circuit_walk(g, &c1, a));
            walk
        }
    };
    Ok(FlowAssignment::from_integers(Orientation::canonical(g), &closed_walk_values(g, &walk)))
}
