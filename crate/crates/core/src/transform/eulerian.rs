//! Decomposing an eulerian signed graph without long barbells into balanced
//! circuits and short barbells.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::limits::Limits;
use crate::structure::{classify_signed_circuit, find_long_barbell_with, is_flow_admissible, Circuit, SignedCircuitKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionMember {
    pub kind: SignedCircuitKind,
    /// Sorted edge ids.
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerianDecomposition {
    pub members: Vec<DecompositionMember>,
}

impl EulerianDecomposition {
    /// Members partition the edge set and each re-classifies as declared
    /// (balanced circuit or short barbell).
    pub fn verify(&self, g: &SignedGraph) -> bool {
        let mut seen = vec![false; g.num_edges()];
        for m in &self.members {
            if m.kind == SignedCircuitKind::LongBarbell {
                return false;
            }
            for &e in &m.edges {
                if e >= g.num_edges() || seen[e] {
                    return false;
                }
                seen[e] = true;
            }
            if !classify_signed_circuit(g, &m.edges).is_some_and(|w| w.kind == m.kind) {
                return false;
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Splits an even edge set into circuits by walking from the smallest unused
/// edge and peeling off a circuit whenever the walk revisits a vertex.
pub(crate) fn split_into_circuits(g: &SignedGraph, edges: &[usize]) -> Result<Vec<Circuit>> {
    let mut unused = vec![false; g.num_edges()];
    for &e in edges {
        unused[e] = true;
    }
    let mut out = Vec::new();
    let mut pos = vec![usize::MAX; g.num_vertices()];
    while let Some(first) = (0..g.num_edges()).find(|&e| unused[e]) {
        let start = g.edge(first).ends[0];
        let mut path_v = vec![start];
        let mut path_e: Vec<usize> = Vec::new();
        pos[start] = 0;
        let mut cur = start;
        loop {
            let Some(e) = g.half_edges_at(cur).iter().map(|h| h.edge).find(|&e| unused[e]) else {
                if !path_e.is_empty() {
                    return Err(Error::Precondition("edge set is not even".into()));
                }
                pos[cur] = usize::MAX;
                break;
            };
            unused[e] = false;
            let w = g.edge(e).opposite(cur);
            if pos[w] != usize::MAX {
                let i = pos[w];
                let mut cyc: Vec<usize> = path_e.drain(i..).collect();
                cyc.push(e);
                for v in path_v.drain(i + 1..) {
                    pos[v] = usize::MAX;
                }
                out.push(Circuit::from_edges(g, &cyc).expect("peeled walk is a circuit"));
            } else {
                pos[w] = path_v.len();
                path_v.push(w);
                path_e.push(e);
            }
            cur = w;
        }
    }
    Ok(out)
}

/// Decomposition of a flow-admissible eulerian graph with an even number of
/// negative edges and no long barbell into balanced circuits and short
/// barbells.
pub fn eulerian_decompose(g: &SignedGraph) -> Result<EulerianDecomposition> {
    eulerian_decompose_with(g, Limits::global())
}

pub fn eulerian_decompose_with(g: &SignedGraph, limits: &Limits) -> Result<EulerianDecomposition> {
    if !g.is_eulerian() {
        return Err(Error::Precondition("graph is not eulerian".into()));
    }
    if g.num_negative() % 2 == 1 {
        return Err(Error::Precondition("odd number of negative edges".into()));
    }
    if !is_flow_admissible(g).admissible {
        return Err(Error::NotFlowAdmissible);
    }
    if find_long_barbell_with(g, limits)?.is_some() {
        return Err(Error::LongBarbell);
    }
    let all: Vec<usize> = (0..g.num_edges()).collect();
    let mut members = Vec::new();
    let mut pool = Vec::new();
    sort_circuits(g, split_into_circuits(g, &all)?, &mut members, &mut pool);
    let component = g.component_map();
    let cap = (g.num_edges() * g.num_edges()).max(1) as u64;
    let mut iterations = 0u64;
    while pool.len() >= 2 {
        iterations += 1;
        if iterations > cap {
            return Err(Error::ResourceCap { what: "eulerian decomposition iterations", limit: cap });
        }
        let common = |i: usize, j: usize| -> BTreeSet<usize> {
            let a: &Circuit = &pool[i];
            let b: &Circuit = &pool[j];
            a.vertex_set().intersection(&b.vertex_set()).copied().collect()
        };
        let pairs: Vec<(usize, usize)> =
            (0..pool.len()).flat_map(|i| (i + 1..pool.len()).map(move |j| (i, j))).collect();
        if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| common(i, j).len() >= 2) {
            let s = common(i, j);
            let c2 = pool.remove(j);
            let c1 = pool.remove(i);
            let (balanced, rest) = extract_balanced(g, &c1, &c2, &s);
            members.push(member(SignedCircuitKind::BalancedCircuit, balanced));
            sort_circuits(g, split_into_circuits(g, &rest)?, &mut members, &mut pool);
            continue;
        }
        if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| common(i, j).len() == 1) {
            let c2 = pool.remove(j);
            let c1 = pool.remove(i);
            let mut edges = c1.edges.clone();
            edges.extend(&c2.edges);
            members.push(member(SignedCircuitKind::ShortBarbell, edges));
            continue;
        }
        let (i, j) = pairs[0];
        let (a, b) = (pool[i].vertices[0], pool[j].vertices[0]);
        return Err(if component[a] == component[b] {
            Error::InvariantViolation("vertex-disjoint unbalanced circuits in one component".into())
        } else {
            Error::Precondition("a component has an odd number of negative edges".into())
        });
    }
    if !pool.is_empty() {
        return Err(Error::Precondition("a component has an odd number of negative edges".into()));
    }
    members.sort_by(|a, b| a.edges.cmp(&b.edges));
    let out = EulerianDecomposition { members };
    if !out.verify(g) {
        return Err(Error::InvariantViolation("decomposition failed re-verification".into()));
    }
    Ok(out)
}

fn member(kind: SignedCircuitKind, mut edges: Vec<usize>) -> DecompositionMember {
    edges.sort_unstable();
    DecompositionMember { kind, edges }
}

fn sort_circuits(g: &SignedGraph, circuits: Vec<Circuit>, members: &mut Vec<DecompositionMember>, pool: &mut Vec<Circuit>) {
    for c in circuits {
        if c.is_balanced(g) {
            members.push(member(SignedCircuitKind::BalancedCircuit, c.edges));
        } else {
            pool.push(c);
        }
    }
}

/// Takes the first arc of `c1` between two consecutive common vertices and
/// closes it with the arc of `c2` of matching negative parity. Returns the
/// balanced circuit and the remaining edges of both circuits.
fn extract_balanced(g: &SignedGraph, c1: &Circuit, c2: &Circuit, common: &BTreeSet<usize>) -> (Vec<usize>, Vec<usize>) {
    let n1 = c1.len();
    let idx: Vec<usize> = (0..n1).filter(|&i| common.contains(&c1.vertices[i])).collect();
    let (a, b) = (idx[0], idx[1]);
    let p1: Vec<usize> = c1.edges[a..b].to_vec();
    let (x1, x2) = (c1.vertices[a], c1.vertices[b]);
    let n2 = c2.len();
    let q1 = c2.vertices.iter().position(|&v| v == x1).expect("common vertex");
    let q2 = c2.vertices.iter().position(|&v| v == x2).expect("common vertex");
    let arc = |from: usize, to: usize| -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = from;
        while i != to {
            out.push(c2.edges[i]);
            i = (i + 1) % n2;
        }
        out
    };
    let negatives = |es: &[usize]| es.iter().filter(|&&e| g.sign(e).is_negative()).count() % 2;
    let forward = arc(q1, q2);
    let backward = arc(q2, q1);
    let p2 = if negatives(&forward) == negatives(&p1) { forward } else { backward };
    let mut balanced = p1.clone();
    balanced.extend(&p2);
    let taken: BTreeSet<usize> = balanced.iter().copied().collect();
    let rest = c1.edges.iter().chain(&c2.edges).copied().filter(|e| !taken.contains(e)).collect();
    (balanced, rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use SignedCircuitKind::*;

    #[test]
    fn all_positive_is_classical() {
        // two triangles sharing a vertex
        let g = SignedGraph::parse("p 5 6 / e 1 2 + / e 2 3 + / e 3 1 + / e 1 4 + / e 4 5 + / e 5 1 +").unwrap();
        let d = eulerian_decompose(&g).unwrap();
        assert!(d.verify(&g));
        assert_eq!(d.members.len(), 2);
        assert!(d.members.iter().all(|m| m.kind == BalancedCircuit));
    }

    #[test]
    fn two_negative_loops_at_a_vertex() {
        let g = SignedGraph::parse("p 1 2 / e 1 1 - / e 1 1 -").unwrap();
        let d = eulerian_decompose(&g).unwrap();
        assert_eq!(d.members, vec![DecompositionMember { kind: ShortBarbell, edges: vec![0, 1] }]);
    }

    #[test]
    fn theta_like_union_of_unbalanced_circuits() {
        // two edge-disjoint unbalanced 4-circuits on the same vertex pair 1, 3:
        // 1-2-3-4-1 and 1-5-3-6-1, one negative edge each
        let g = SignedGraph::parse(
            "p 6 8 / e 1 2 - / e 2 3 + / e 3 4 + / e 4 1 + / e 1 5 + / e 5 3 + / e 3 6 - / e 6 1 +",
        )
        .unwrap();
        let circuits = split_into_circuits(&g, &(0..8).collect::<Vec<_>>()).unwrap();
        assert!(circuits.iter().any(|c| !c.is_balanced(&g)));
        let d = eulerian_decompose(&g).unwrap();
        assert!(d.verify(&g));
        assert!(d.members.iter().all(|m| m.kind == BalancedCircuit));
    }

    #[test]
    fn splitting_covers_edges() {
        let g = SignedGraph::parse("p 3 6 / e 1 2 + / e 2 3 + / e 3 1 + / e 1 1 - / e 2 3 - / e 3 2 +").unwrap();
        let cs = split_into_circuits(&g, &(0..6).collect::<Vec<_>>()).unwrap();
        let mut all: Vec<usize> = cs.iter().flat_map(|c| c.edges.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn preconditions() {
        let g = SignedGraph::parse("p 3 2 / e 1 2 + / e 2 3 +").unwrap();
        assert!(matches!(eulerian_decompose(&g), Err(Error::Precondition(_))));
        let g = SignedGraph::parse("p 3 3 / e 1 2 + / e 2 3 + / e 3 1 -").unwrap();
        assert!(matches!(eulerian_decompose(&g), Err(Error::Precondition(_))));
    }
}
