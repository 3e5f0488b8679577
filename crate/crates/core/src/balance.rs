//! Balance certificates and switching-class normal forms.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::graph::{Sign, SignedGraph};

/// Either a switching potential proving balance or an unbalanced circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "certificate", rename_all = "kebab-case")]
pub enum BalanceCertificate {
    /// `sign(uv) = potential(u) * potential(v)` on every edge.
    Balanced { potential: Vec<Sign> },
    /// Edge ids of an unbalanced circuit, in traversal order.
    Unbalanced { circuit: Vec<usize> },
}

impl BalanceCertificate {
    pub fn is_balanced(&self) -> bool {
        matches!(self, BalanceCertificate::Balanced { .. })
    }

    /// The witness circuit, if unbalanced.
    pub fn circuit(&self) -> Option<&[usize]> {
        match self {
            BalanceCertificate::Unbalanced { circuit } => Some(circuit),
            _ => None,
        }
    }

    /// Re-checks the certificate by direct substitution.
    pub fn verify(&self, g: &SignedGraph) -> bool {
        match self {
            BalanceCertificate::Balanced { potential } => {
                potential.len() == g.num_vertices()
                    && g.edges().iter().all(|e| e.sign == potential[e.ends[0]] * potential[e.ends[1]])
            }
            BalanceCertificate::Unbalanced { circuit } => {
                crate::structure::circuit::Circuit::from_edges(g, circuit)
                    .map(|c| c.num_negative(g) % 2 == 1)
                    .unwrap_or(false)
            }
        }
    }
}

/// Spanning-forest potential propagation; the first non-tree edge (by id)
/// that disagrees with the potential closes the witness circuit.
pub fn is_balanced(g: &SignedGraph) -> BalanceCertificate {
    is_balanced_masked(g, |_| true)
}

/// [`is_balanced`] restricted to the edges accepted by `allowed`.
pub(crate) fn is_balanced_masked(g: &SignedGraph, allowed: impl Fn(usize) -> bool) -> BalanceCertificate {
    let n = g.num_vertices();
    let mut potential = vec![Sign::Positive; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree_edge = vec![false; g.num_edges()];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for h in g.half_edges_at(v) {
                if !allowed(h.edge) {
                    continue;
                }
                let e = g.edge(h.edge);
                let w = e.opposite(v);
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    potential[w] = potential[v] * e.sign;
                    parent[w] = Some((v, h.edge));
                    tree_edge[h.edge] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    for (id, e) in g.edges().iter().enumerate() {
        if !allowed(id) || tree_edge[id] {
            continue;
        }
        let (u, v) = (e.ends[0], e.ends[1]);
        if potential[u] * potential[v] == e.sign {
            continue;
        }
        // tree path u -> lca -> v, then the offending edge back to u
        let (mut a, mut b) = (u, v);
        let mut up = Vec::new();
        let mut down = Vec::new();
        while a != b {
            if depth[a] >= depth[b] {
                let (p, pe) = parent[a].unwrap();
                up.push(pe);
                a = p;
            } else {
                let (p, pe) = parent[b].unwrap();
                down.push(pe);
                b = p;
            }
        }
        down.reverse();
        let mut circuit = up;
        circuit.extend(down);
        circuit.push(id);
        return BalanceCertificate::Unbalanced { circuit };
    }
    BalanceCertificate::Balanced { potential }
}

/// An unbalanced circuit, if any.
pub fn find_unbalanced_circuit(g: &SignedGraph) -> Option<Vec<usize>> {
    match is_balanced(g) {
        BalanceCertificate::Unbalanced { circuit } => Some(circuit),
        BalanceCertificate::Balanced { .. } => None,
    }
}

/// Switching normal form: switch so that every edge of the BFS spanning
/// forest (roots = smallest vertex of each component, edges scanned in id
/// order) is positive. Two signatures on the same graph are switching
/// equivalent iff their normal forms coincide.
///
/// Returns the normalized graph and the switching set used.
pub fn switching_normal_form(g: &SignedGraph) -> (SignedGraph, Vec<usize>) {
    let n = g.num_vertices();
    let mut potential = vec![Sign::Positive; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for h in g.half_edges_at(v) {
                let e = g.edge(h.edge);
                let w = e.opposite(v);
                if !seen[w] {
                    seen[w] = true;
                    potential[w] = potential[v] * e.sign;
                    queue.push_back(w);
                }
            }
        }
    }
    let set: Vec<usize> = (0..n).filter(|&v| potential[v].is_negative()).collect();
    (g.switch(&set).expect("vertices in range"), set)
}

pub fn switching_equivalent(a: &SignedGraph, b: &SignedGraph) -> bool {
    a.num_vertices() == b.num_vertices()
        && a.edges().iter().zip(b.edges()).all(|(x, y)| x.ends == y.ends)
        && a.num_edges() == b.num_edges()
        && switching_normal_form(a).0 == switching_normal_form(b).0
}
