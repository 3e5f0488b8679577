//! Circuits, signed circuits and their classification.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SignedGraph;

/// A circuit stored in traversal order: `edges[i]` runs from `vertices[i]`
/// to `vertices[(i + 1) % len]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

impl Circuit {
    /// Orders an edge set into a circuit, starting from its smallest edge.
    /// Returns `None` unless the edges form a connected 2-regular subgraph.
    pub fn from_edges(g: &SignedGraph, edges: &[usize]) -> Option<Circuit> {
        if edges.is_empty() {
            return None;
        }
        let set: BTreeSet<usize> = edges.iter().copied().collect();
        if set.len() != edges.len() || set.iter().any(|&e| e >= g.num_edges()) {
            return None;
        }
        let mut deg = std::collections::HashMap::new();
        for &e in &set {
            for v in g.edge(e).ends {
                *deg.entry(v).or_insert(0usize) += 1;
            }
        }
        if deg.values().any(|&d| d != 2) {
            return None;
        }
        let first = *set.iter().next().unwrap();
        let e0 = g.edge(first);
        if e0.is_loop() {
            return (set.len() == 1).then(|| Circuit { edges: vec![first], vertices: vec![e0.ends[0]] });
        }
        let start = e0.ends[0];
        let mut out_edges = vec![first];
        let mut out_vertices = vec![start];
        let mut prev = first;
        let mut cur = e0.ends[1];
        while cur != start {
            let next = g
                .half_edges_at(cur)
                .iter()
                .map(|h| h.edge)
                .find(|&e| e != prev && set.contains(&e))?;
            out_vertices.push(cur);
            out_edges.push(next);
            cur = g.edge(next).opposite(cur);
            prev = next;
        }
        (out_edges.len() == set.len()).then_some(Circuit { edges: out_edges, vertices: out_vertices })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn num_negative(&self, g: &SignedGraph) -> usize {
        self.edges.iter().filter(|&&e| g.sign(e).is_negative()).count()
    }

    pub fn is_balanced(&self, g: &SignedGraph) -> bool {
        self.num_negative(g) % 2 == 0
    }

    pub fn vertex_set(&self) -> BTreeSet<usize> {
        self.vertices.iter().copied().collect()
    }

    fn sort_key(&self) -> (usize, Vec<usize>) {
        let mut ids = self.edges.clone();
        ids.sort_unstable();
        (ids.len(), ids)
    }
}

/// Every circuit of the subgraph formed by the allowed edges, shortest first
/// and then lexicographically by sorted edge ids.
pub fn enumerate_circuits(
    g: &SignedGraph,
    allowed: impl Fn(usize) -> bool,
    cap: u64,
) -> Result<Vec<Circuit>> {
    let mut found: Vec<Circuit> = Vec::new();
    let overflow = || Error::ResourceCap { what: "circuit enumeration", limit: cap };
    for (id, e) in g.edges().iter().enumerate() {
        if allowed(id) && e.is_loop() {
            found.push(Circuit { edges: vec![id], vertices: vec![e.ends[0]] });
        }
    }
    if found.len() as u64 > cap {
        return Err(overflow());
    }
    let n = g.num_vertices();
    let mut on_path = vec![false; n];
    for s in 0..n {
        // simple paths from s through vertices > s, closed by an edge back to s
        let mut path_edges: Vec<usize> = Vec::new();
        let mut path_vertices: Vec<usize> = vec![s];
        on_path[s] = true;
        let mut iters: Vec<usize> = vec![0];
        while let Some(idx) = iters.last_mut() {
            let v = *path_vertices.last().unwrap();
            let inc = g.half_edges_at(v);
            if *idx >= inc.len() {
                iters.pop();
                path_vertices.pop();
                on_path[v] = false;
                path_edges.pop();
                continue;
            }
            let h = inc[*idx];
            *idx += 1;
            let e = h.edge;
            if !allowed(e) || g.edge(e).is_loop() || path_edges.last() == Some(&e) {
                continue;
            }
            let w = g.edge(e).opposite(v);
            if w == s {
                if !path_edges.is_empty() && path_edges[0] < e {
                    let mut edges = path_edges.clone();
                    edges.push(e);
                    found.push(Circuit { edges, vertices: path_vertices.clone() });
                    if found.len() as u64 > cap {
                        return Err(overflow());
                    }
                }
                continue;
            }
            if w < s || on_path[w] {
                continue;
            }
            on_path[w] = true;
            path_vertices.push(w);
            path_edges.push(e);
            iters.push(0);
        }
    }
    found.sort_by_cached_key(Circuit::sort_key);
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignedCircuitKind {
    BalancedCircuit,
    ShortBarbell,
    LongBarbell,
}

/// A balanced circuit, a short barbell, or a long barbell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedCircuitWitness {
    pub kind: SignedCircuitKind,
    /// One circuit (balanced) or two unbalanced circuits, each in traversal order.
    pub circuits: Vec<Vec<usize>>,
    /// Connecting path for a long barbell, from the first circuit to the second.
    pub path: Vec<usize>,
}

impl SignedCircuitWitness {
    pub fn edges(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.circuits.iter().flatten().copied().collect();
        all.extend(&self.path);
        all.sort_unstable();
        all
    }

    /// Re-derives the classification from the edge set alone.
    pub fn verify(&self, g: &SignedGraph) -> bool {
        classify_signed_circuit(g, &self.edges()).is_some_and(|w| w.kind == self.kind)
    }
}

/// Walks from `start` along `first` through degree-2 vertices of the edge
/// set until a vertex with `stop(v)` is reached. Returns edges and end vertex.
fn walk_until(
    g: &SignedGraph,
    in_set: &dyn Fn(usize) -> bool,
    start: usize,
    first: usize,
    stop: &dyn Fn(usize) -> bool,
) -> Option<(Vec<usize>, usize)> {
    let mut edges = vec![first];
    let mut prev = first;
    let mut cur = g.edge(first).opposite(start);
    let mut guard = 0;
    while !stop(cur) {
        let next = g
            .half_edges_at(cur)
            .iter()
            .map(|h| h.edge)
            .find(|&e| e != prev && in_set(e))?;
        edges.push(next);
        cur = g.edge(next).opposite(cur);
        prev = next;
        guard += 1;
        if guard > g.num_edges() {
            return None;
        }
    }
    Some((edges, cur))
}

/// Classifies the subgraph formed by `edges` as one of the three signed
/// circuit types, or `None`.
pub fn classify_signed_circuit(g: &SignedGraph, edges: &[usize]) -> Option<SignedCircuitWitness> {
    let set: BTreeSet<usize> = edges.iter().copied().collect();
    if set.is_empty() || set.len() != edges.len() || set.iter().any(|&e| e >= g.num_edges()) {
        return None;
    }
    let mut deg = vec![0usize; g.num_vertices()];
    for &e in &set {
        for v in g.edge(e).ends {
            deg[v] += 1;
        }
    }
    // connectivity of the edge-induced subgraph
    let (sub, _) = g.edge_subgraph(&set.iter().copied().collect::<Vec<_>>());
    let touched: Vec<usize> = (0..g.num_vertices()).filter(|&v| deg[v] > 0).collect();
    let comps = sub.connected_components();
    if comps.iter().filter(|c| c.iter().any(|&v| deg[v] > 0)).count() != 1 {
        return None;
    }
    let in_set = |e: usize| set.contains(&e);
    let high: Vec<usize> = touched.iter().copied().filter(|&v| deg[v] != 2).collect();

    if high.is_empty() {
        let c = Circuit::from_edges(g, edges)?;
        return (c.num_negative(g) % 2 == 0).then(|| SignedCircuitWitness {
            kind: SignedCircuitKind::BalancedCircuit,
            circuits: vec![c.edges],
            path: Vec::new(),
        });
    }
    if high.len() == 1 && deg[high[0]] == 4 {
        let c = high[0];
        let first = g.half_edges_at(c).iter().map(|h| h.edge).find(|&e| in_set(e))?;
        let (c1, end) = walk_until(g, &in_set, c, first, &|v| v == c)?;
        debug_assert_eq!(end, c);
        let rest: Vec<usize> = set.iter().copied().filter(|e| !c1.contains(e)).collect();
        let c1 = Circuit::from_edges(g, &c1)?;
        let c2 = Circuit::from_edges(g, &rest)?;
        if c1.num_negative(g) % 2 == 1 && c2.num_negative(g) % 2 == 1 {
            return Some(SignedCircuitWitness {
                kind: SignedCircuitKind::ShortBarbell,
                circuits: vec![c1.edges, c2.edges],
                path: Vec::new(),
            });
        }
        return None;
    }
    if high.len() == 2 && deg[high[0]] == 3 && deg[high[1]] == 3 {
        let (a, b) = (high[0], high[1]);
        let stop = |v: usize| v == a || v == b;
        // collect the three walks leaving a
        let mut walks = Vec::new();
        let mut used = BTreeSet::new();
        for h in g.half_edges_at(a) {
            if !in_set(h.edge) || used.contains(&h.edge) {
                continue;
            }
            let (w, end) = walk_until(g, &in_set, a, h.edge, &stop)?;
            used.extend(w.iter().copied());
            walks.push((w, end));
        }
        let to_b: Vec<&(Vec<usize>, usize)> = walks.iter().filter(|(_, end)| *end == b).collect();
        let loops_a: Vec<&(Vec<usize>, usize)> = walks.iter().filter(|(_, end)| *end == a).collect();
        if to_b.len() != 1 || loops_a.len() != 1 {
            return None;
        }
        let path = to_b[0].0.clone();
        let ca = Circuit::from_edges(g, &loops_a[0].0)?;
        let rest: Vec<usize> = set
            .iter()
            .copied()
            .filter(|e| !path.contains(e) && !ca.edges.contains(e))
            .collect();
        let cb = Circuit::from_edges(g, &rest)?;
        if ca.num_negative(g) % 2 == 1 && cb.num_negative(g) % 2 == 1 {
            return Some(SignedCircuitWitness {
                kind: SignedCircuitKind::LongBarbell,
                circuits: vec![ca.edges, cb.edges],
                path,
            });
        }
        return None;
    }
    None
}

/// Spanning forest of the allowed edges, BFS from the smallest vertex of
/// every component, edges scanned in id order.
pub(crate) struct SpanningForest {
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    pub tree_edge: Vec<bool>,
    pub root: Vec<usize>,
}

impl SpanningForest {
    pub fn new(g: &SignedGraph, allowed: &dyn Fn(usize) -> bool) -> Self {
        let n = g.num_vertices();
        let mut parent = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut root = vec![usize::MAX; n];
        let mut tree_edge = vec![false; g.num_edges()];
        for r in 0..n {
            if depth[r] != usize::MAX {
                continue;
            }
            depth[r] = 0;
            root[r] = r;
            let mut queue = VecDeque::from([r]);
            while let Some(v) = queue.pop_front() {
                for h in g.half_edges_at(v) {
                    if !allowed(h.edge) {
                        continue;
                    }
                    let w = g.edge(h.edge).opposite(v);
                    if depth[w] == usize::MAX {
                        depth[w] = depth[v] + 1;
                        root[w] = r;
                        parent[w] = Some((v, h.edge));
                        tree_edge[h.edge] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        SpanningForest { parent, depth, tree_edge, root }
    }

    /// The circuit closed by a non-tree edge.
    pub fn fundamental_circuit(&self, g: &SignedGraph, e: usize) -> Circuit {
        let edge = g.edge(e);
        let (u, v) = (edge.ends[0], edge.ends[1]);
        let (mut a, mut b) = (u, v);
        let mut up_e = Vec::new();
        let mut up_v = Vec::new();
        let mut down_e = Vec::new();
        let mut down_v = Vec::new();
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let (p, pe) = self.parent[a].unwrap();
                up_v.push(a);
                up_e.push(pe);
                a = p;
            } else {
                let (p, pe) = self.parent[b].unwrap();
                down_v.push(p);
                down_e.push(pe);
                b = p;
            }
        }
        // walk u -> lca along up, lca -> v along reversed down, then e: v -> u
        let mut edges = up_e;
        let mut vertices = up_v;
        down_e.reverse();
        down_v.reverse();
        edges.extend(down_e);
        vertices.extend(down_v);
        edges.push(e);
        vertices.push(v);
        Circuit { edges, vertices }
    }
}

/// Combines two distinct unbalanced circuits of one connected subgraph
/// (edges accepted by `allowed`) into a signed circuit.
pub(crate) fn combine_unbalanced(
    g: &SignedGraph,
    c1: &Circuit,
    c2: &Circuit,
    allowed: &dyn Fn(usize) -> bool,
) -> Option<SignedCircuitWitness> {
    let v2 = c2.vertex_set();
    let common: Vec<usize> = c1.vertex_set().intersection(&v2).copied().collect();
    if common.is_empty() {
        let from: Vec<usize> = c1.vertices.clone();
        let to: Vec<usize> = c2.vertices.clone();
        let (path, _, _) = g.shortest_path_between(&from, &to, allowed)?;
        return Some(SignedCircuitWitness {
            kind: SignedCircuitKind::LongBarbell,
            circuits: vec![c1.edges.clone(), c2.edges.clone()],
            path,
        });
    }
    if common.len() == 1 {
        return Some(SignedCircuitWitness {
            kind: SignedCircuitKind::ShortBarbell,
            circuits: vec![c1.edges.clone(), c2.edges.clone()],
            path: Vec::new(),
        });
    }
    // an arc of c1 whose interior avoids c2, closed by the parity-matching arc of c2
    let len = c1.len();
    let j = (0..len).find(|&i| !c2.edges.contains(&c1.edges[i]))?;
    let mut fwd = (j + 1) % len;
    while !v2.contains(&c1.vertices[fwd]) {
        fwd = (fwd + 1) % len;
    }
    let mut back = j;
    while !v2.contains(&c1.vertices[back]) {
        back = (back + len - 1) % len;
    }
    let mut p1 = Vec::new();
    let mut i = back;
    loop {
        p1.push(c1.edges[i]);
        i = (i + 1) % len;
        if i == fwd {
            break;
        }
    }
    let (x1, x2) = (c1.vertices[back], c1.vertices[fwd]);
    let l2 = c2.len();
    let p1_neg = p1.iter().filter(|&&e| g.sign(e).is_negative()).count();
    let pos1 = c2.vertices.iter().position(|&v| v == x1)?;
    let pos2 = c2.vertices.iter().position(|&v| v == x2)?;
    let mut arc = Vec::new();
    let mut i = pos1;
    while i != pos2 {
        arc.push(c2.edges[i]);
        i = (i + 1) % l2;
    }
    let arc_neg = arc.iter().filter(|&&e| g.sign(e).is_negative()).count();
    let chosen: Vec<usize> = if arc_neg % 2 == p1_neg % 2 {
        arc
    } else {
        c2.edges.iter().copied().filter(|e| !arc.contains(e)).collect()
    };
    let mut edges = p1;
    edges.extend(chosen);
    let c = Circuit::from_edges(g, &edges)?;
    debug_assert!(c.is_balanced(g));
    Some(SignedCircuitWitness {
        kind: SignedCircuitKind::BalancedCircuit,
        circuits: vec![c.edges],
        path: Vec::new(),
    })
}

/// Some signed circuit inside the subgraph formed by `edges`, if one exists.
///
/// A component contains a signed circuit exactly when its cycle space has a
/// balanced member or dimension at least two.
pub fn find_signed_circuit_in(g: &SignedGraph, edges: &[usize]) -> Option<SignedCircuitWitness> {
    let mask: BTreeSet<usize> = edges.iter().copied().collect();
    let allowed = |e: usize| mask.contains(&e);
    let forest = SpanningForest::new(g, &allowed);
    let mut by_root: std::collections::BTreeMap<usize, Vec<Circuit>> = Default::default();
    for &e in &mask {
        if forest.tree_edge[e] {
            continue;
        }
        let c = forest.fundamental_circuit(g, e);
        if c.is_balanced(g) {
            return Some(SignedCircuitWitness {
                kind: SignedCircuitKind::BalancedCircuit,
                circuits: vec![Circuit::from_edges(g, &c.edges).unwrap().edges],
                path: Vec::new(),
            });
        }
        by_root.entry(forest.root[g.edge(e).ends[0]]).or_default().push(c);
    }
    for circuits in by_root.values() {
        if circuits.len() >= 2 {
            return combine_unbalanced(g, &circuits[0], &circuits[1], &allowed);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use SignedCircuitKind::*;

    fn g(text: &str) -> SignedGraph {
        SignedGraph::parse(text).unwrap()
    }

    #[test]
    fn even_positive_circuit_is_balanced() {
        let g = g("p 4 4 / e 1 2 + / e 2 3 + / e 3 4 + / e 4 1 +");
        let w = classify_signed_circuit(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(w.kind, BalancedCircuit);
        assert!(w.verify(&g));
    }

    #[test]
    fn unbalanced_circuit_alone_is_not_signed() {
        let g = g("p 3 3 / e 1 2 + / e 2 3 + / e 3 1 -");
        assert!(classify_signed_circuit(&g, &[0, 1, 2]).is_none());
    }

    #[test]
    fn two_negative_loops_at_a_vertex() {
        let g = g("p 1 2 / e 1 1 - / e 1 1 -");
        let w = classify_signed_circuit(&g, &[0, 1]).unwrap();
        assert_eq!(w.kind, ShortBarbell);
    }

    #[test]
    fn loops_joined_by_path() {
        let g = g("p 3 4 / e 1 1 - / e 1 2 + / e 2 3 + / e 3 3 -");
        let w = classify_signed_circuit(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(w.kind, LongBarbell);
        assert_eq!(w.path, vec![1, 2]);
        assert!(w.verify(&g));
    }

    #[test]
    fn theta_is_not_a_barbell() {
        let g = g("p 2 3 / e 1 2 + / e 1 2 + / e 1 2 -");
        assert!(classify_signed_circuit(&g, &[0, 1, 2]).is_none());
    }

    #[test]
    fn enumerate_k4_circuits() {
        let g = g("p 4 6 / e 1 2 + / e 1 3 + / e 1 4 + / e 2 3 + / e 2 4 + / e 3 4 +");
        let cs = enumerate_circuits(&g, |_| true, 1000).unwrap();
        // 4 triangles + 3 four-cycles
        assert_eq!(cs.len(), 7);
        assert!(cs[..4].iter().all(|c| c.len() == 3));
        for c in &cs {
            assert_eq!(Circuit::from_edges(&g, &c.edges).unwrap().len(), c.len());
        }
    }

    #[test]
    fn enumerate_multigraph_circuits() {
        let g = g("p 2 4 / e 1 1 - / e 1 2 + / e 1 2 - / e 1 2 +");
        let cs = enumerate_circuits(&g, |_| true, 1000).unwrap();
        assert_eq!(cs.len(), 4); // loop + three digons
        assert!(enumerate_circuits(&g, |_| true, 2).is_err());
    }

    #[test]
    fn signed_circuit_inside_theta() {
        let g = g("p 2 3 / e 1 2 + / e 1 2 - / e 1 2 -");
        let w = find_signed_circuit_in(&g, &[0, 1, 2]).unwrap();
        assert_eq!(w.kind, BalancedCircuit);
        assert!(w.verify(&g));
    }

    #[test]
    fn signed_circuit_absent_in_lone_unbalanced_cycle() {
        let g = g("p 3 4 / e 1 1 - / e 1 2 + / e 2 3 + / e 3 3 -");
        assert!(find_signed_circuit_in(&g, &[0, 3]).is_none());
        let w = find_signed_circuit_in(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(w.kind, LongBarbell);
        assert!(w.verify(&g));
    }

    #[test]
    fn combine_overlapping_unbalanced_circuits() {
        // two triangles sharing the edge 1-2, each with one negative edge
        let g = g("p 4 5 / e 1 2 + / e 2 3 + / e 3 1 - / e 2 4 + / e 4 1 -");
        let w = find_signed_circuit_in(&g, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(w.kind, BalancedCircuit);
        assert!(w.verify(&g));
    }
}
