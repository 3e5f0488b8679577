//! Flow-admissibility, star-cuts and antibalance.

use serde::{Deserialize, Serialize};

use crate::balance::{is_balanced, is_balanced_masked, BalanceCertificate};
use crate::graph::SignedGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum AdmissibilityReason {
    Ok,
    /// Switching at `switching_set` leaves `edge` as the only negative edge
    /// of the component.
    EquivalentToOneNegativeEdge { switching_set: Vec<usize>, edge: usize },
    /// Deleting `edge` leaves `balanced_side` as a balanced component.
    BadCutEdge { edge: usize, balanced_side: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentVerdict {
    pub vertices: Vec<usize>,
    #[serde(flatten)]
    pub reason: AdmissibilityReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    pub components: Vec<ComponentVerdict>,
}

impl AdmissibilityVerdict {
    /// First failing reason, if any.
    pub fn failure(&self) -> Option<&AdmissibilityReason> {
        self.components
            .iter()
            .map(|c| &c.reason)
            .find(|r| !matches!(r, AdmissibilityReason::Ok))
    }

    /// Re-checks every failing reason directly. `Ok` reasons are recomputed.
    pub fn verify(&self, g: &SignedGraph) -> bool {
        let fresh = is_flow_admissible(g);
        if fresh.admissible != self.admissible {
            return false;
        }
        self.components.iter().all(|c| match &c.reason {
            AdmissibilityReason::Ok => true,
            AdmissibilityReason::EquivalentToOneNegativeEdge { switching_set, edge } => {
                let Ok(h) = g.switch(switching_set) else { return false };
                let negs: Vec<usize> = h
                    .negative_edges()
                    .into_iter()
                    .filter(|&e| c.vertices.binary_search(&h.edge(e).ends[0]).is_ok())
                    .collect();
                negs == vec![*edge]
            }
            AdmissibilityReason::BadCutEdge { edge, balanced_side } => {
                let side = |e: usize| {
                    *edge != e
                        && g.edge(e).ends.iter().all(|v| balanced_side.binary_search(v).is_ok())
                };
                g.find_bridges().contains(edge) && is_balanced_masked(g, side).is_balanced()
            }
        })
    }
}

/// A component fails if it is switching equivalent to a signature with
/// exactly one negative edge, or if deleting some bridge leaves a balanced
/// component on either side.
pub fn is_flow_admissible(g: &SignedGraph) -> AdmissibilityVerdict {
    let comp = g.component_map();
    let bridges = g.find_bridges();
    let mut components = Vec::new();
    for vertices in g.connected_components() {
        let cid = comp[vertices[0]];
        let in_comp = |e: usize| comp[g.edge(e).ends[0]] == cid;
        let reason = one_negative_edge(g, &in_comp)
            .or_else(|| bad_cut_edge(g, &bridges, &in_comp))
            .unwrap_or(AdmissibilityReason::Ok);
        components.push(ComponentVerdict { vertices, reason });
    }
    let admissible = components.iter().all(|c| c.reason == AdmissibilityReason::Ok);
    AdmissibilityVerdict { admissible, components }
}

/// An unbalanced component with an edge whose deletion balances it is
/// equivalent to that single negative edge.
fn one_negative_edge(g: &SignedGraph, in_comp: &dyn Fn(usize) -> bool) -> Option<AdmissibilityReason> {
    if is_balanced_masked(g, in_comp).is_balanced() {
        return None;
    }
    for e in (0..g.num_edges()).filter(|&e| in_comp(e)) {
        if let BalanceCertificate::Balanced { potential } = is_balanced_masked(g, |f| f != e && in_comp(f)) {
            let switching_set = (0..g.num_vertices())
                .filter(|&v| potential[v].is_negative() && g.degree(v) > 0 && in_comp_vertex(g, in_comp, v))
                .collect();
            return Some(AdmissibilityReason::EquivalentToOneNegativeEdge { switching_set, edge: e });
        }
    }
    None
}

fn in_comp_vertex(g: &SignedGraph, in_comp: &dyn Fn(usize) -> bool, v: usize) -> bool {
    g.half_edges_at(v).iter().any(|h| in_comp(h.edge))
}

fn bad_cut_edge(
    g: &SignedGraph,
    bridges: &[usize],
    in_comp: &dyn Fn(usize) -> bool,
) -> Option<AdmissibilityReason> {
    for &b in bridges.iter().filter(|&&b| in_comp(b)) {
        for start in g.edge(b).ends {
            let side = reachable_without(g, start, b);
            let mut mask = vec![false; g.num_vertices()];
            for &v in &side {
                mask[v] = true;
            }
            let allowed = |e: usize| e != b && mask[g.edge(e).ends[0]] && mask[g.edge(e).ends[1]];
            if is_balanced_masked(g, allowed).is_balanced() {
                return Some(AdmissibilityReason::BadCutEdge { edge: b, balanced_side: side });
            }
        }
    }
    None
}

/// Sorted vertices reachable from `start` without crossing `skip`.
fn reachable_without(g: &SignedGraph, start: usize, skip: usize) -> Vec<usize> {
    let mut seen = vec![false; g.num_vertices()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for h in g.half_edges_at(v) {
            if h.edge == skip {
                continue;
            }
            let w = g.edge(h.edge).opposite(v);
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    (0..g.num_vertices()).filter(|&v| seen[v]).collect()
}

/// An induced star all of whose edges are bridges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarCut {
    pub center: usize,
    pub leaves: Vec<usize>,
    pub edges: Vec<usize>,
}

/// The largest star-cut centred at the smallest possible vertex: the centre
/// takes its bridge neighbours, pruned until the induced subgraph is a star.
pub fn has_star_cut(g: &SignedGraph) -> Option<StarCut> {
    let bridges = g.find_bridges();
    let is_bridge = |e: usize| bridges.binary_search(&e).is_ok();
    let mut best: Option<StarCut> = None;
    for c in 0..g.num_vertices() {
        if g.half_edges_at(c).iter().any(|h| g.edge(h.edge).is_loop()) {
            continue;
        }
        // bridge neighbours; a bridge is never parallel to another edge
        let mut cand: Vec<(usize, usize)> = g
            .half_edges_at(c)
            .iter()
            .filter(|h| is_bridge(h.edge))
            .map(|h| (g.edge(h.edge).opposite(c), h.edge))
            .collect();
        cand.sort_unstable();
        // greedily keep leaves with no edges to already kept leaves
        let mut leaves: Vec<(usize, usize)> = Vec::new();
        for (w, e) in cand {
            let clash = g.half_edges_at(w).iter().any(|h| {
                let x = g.edge(h.edge).opposite(w);
                h.edge != e && (x == w || x == c || leaves.iter().any(|&(l, _)| l == x))
            });
            if !clash {
                leaves.push((w, e));
            }
        }
        if leaves.is_empty() {
            continue;
        }
        let better = best.as_ref().map_or(true, |b| leaves.len() > b.leaves.len());
        if better {
            best = Some(StarCut {
                center: c,
                leaves: leaves.iter().map(|&(l, _)| l).collect(),
                edges: leaves.iter().map(|&(_, e)| e).collect(),
            });
        }
    }
    best
}

impl StarCut {
    pub fn verify(&self, g: &SignedGraph) -> bool {
        let bridges = g.find_bridges();
        let mut vs = self.leaves.clone();
        vs.push(self.center);
        vs.sort_unstable();
        vs.dedup();
        if vs.len() != self.leaves.len() + 1 || self.leaves.is_empty() {
            return false;
        }
        let (sub, _, edge_map) = g.induced_subgraph(&vs);
        let mut expected = self.edges.clone();
        expected.sort_unstable();
        let mut got = edge_map.clone();
        got.sort_unstable();
        sub.num_edges() == self.leaves.len()
            && got == expected
            && self.edges.iter().all(|e| bridges.contains(e))
            && self.edges.iter().zip(&self.leaves).all(|(&e, &l)| {
                let ends = g.edge(e).ends;
                ends.contains(&self.center) && ends.contains(&l)
            })
    }
}

/// Balance certificate of the sign-negated graph: a potential means `g` is
/// switching equivalent to the all-negative signature.
pub fn is_antibalanced(g: &SignedGraph) -> BalanceCertificate {
    is_balanced(&g.negated())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(t: &str) -> SignedGraph {
        SignedGraph::parse(t).unwrap()
    }

    #[test]
    fn lone_negative_loop_is_not_admissible() {
        let g = g("p 1 1 / e 1 1 -");
        let v = is_flow_admissible(&g);
        assert!(!v.admissible);
        assert!(matches!(v.failure(), Some(AdmissibilityReason::EquivalentToOneNegativeEdge { edge: 0, .. })));
        assert!(v.verify(&g));
    }

    #[test]
    fn switched_single_negative_edge_detected() {
        // triangle with one negative edge, then switched at vertex 1
        let t = g("p 3 3 / e 1 2 + / e 2 3 + / e 3 1 -").switch(&[0]).unwrap();
        let v = is_flow_admissible(&t);
        assert!(!v.admissible);
        assert!(v.verify(&t));
    }

    #[test]
    fn balanced_bridgeless_is_admissible() {
        let g = g("p 3 3 / e 1 2 + / e 2 3 + / e 3 1 +");
        assert!(is_flow_admissible(&g).admissible);
    }

    #[test]
    fn tree_is_not_admissible() {
        let g = g("p 3 2 / e 1 2 + / e 2 3 +");
        let v = is_flow_admissible(&g);
        assert!(matches!(v.failure(), Some(AdmissibilityReason::BadCutEdge { .. })));
        assert!(v.verify(&g));
    }

    #[test]
    fn barbell_bridge_between_unbalanced_sides_is_fine() {
        let g = g("p 2 3 / e 1 1 - / e 1 2 + / e 2 2 -");
        assert!(is_flow_admissible(&g).admissible);
    }

    #[test]
    fn star_cuts() {
        let path = g("p 3 2 / e 1 2 + / e 2 3 +");
        let s = has_star_cut(&path).unwrap();
        assert_eq!((s.center, s.leaves.clone()), (1, vec![0, 2]));
        assert!(s.verify(&path));
        let tri = g("p 3 3 / e 1 2 + / e 2 3 + / e 3 1 +");
        assert!(has_star_cut(&tri).is_none());
        let two = g("p 6 7 / e 1 2 + / e 2 3 + / e 3 1 + / e 3 4 + / e 4 5 + / e 5 6 + / e 6 4 +");
        let s = has_star_cut(&two).unwrap();
        assert_eq!(s.edges, vec![3]);
        assert!(s.verify(&two));
    }

    #[test]
    fn antibalance() {
        assert!(is_antibalanced(&g("p 3 3 / e 1 2 - / e 2 3 - / e 3 1 -")).is_balanced());
        assert!(!is_antibalanced(&g("p 3 3 / e 1 2 + / e 2 3 + / e 3 1 +")).is_balanced());
        assert!(is_antibalanced(&g("p 4 4 / e 1 2 + / e 2 3 + / e 3 4 + / e 4 1 +")).is_balanced());
    }
}
