//! Paper instances and desk-scale graph families.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{ratio, FlowAssignment};
use crate::graph::{Edge, Sign, SignedGraph};
use crate::limits::Limits;
use crate::solve::find_flow_with_domains;

/// Largest bounds accepted by [`enumerate_signed_graphs`].
pub const MAX_ENUM_VERTICES: usize = 6;
pub const MAX_ENUM_EDGES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CorpusSpec {
    Petersen,
    GFamily { t: usize },
    W5AllSignatures,
    Enumerate { max_v: usize, max_e: usize },
    Random { seed: u64, v: usize, e: usize, neg_prob: f64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusItem {
    pub id: String,
    pub graph: SignedGraph,
}

pub fn generate(spec: &CorpusSpec) -> Result<Vec<CorpusItem>> {
    let items = match spec {
        CorpusSpec::Petersen => vec![CorpusItem { id: "petersen".into(), graph: signed_petersen() }],
        CorpusSpec::GFamily { t } => vec![CorpusItem { id: format!("g{t}"), graph: g_family(*t)? }],
        CorpusSpec::W5AllSignatures => w5_all_signatures()
            .into_iter()
            .enumerate()
            .map(|(i, graph)| CorpusItem { id: format!("w5-{i:03}"), graph })
            .collect(),
        CorpusSpec::Enumerate { max_v, max_e } => enumerate_signed_graphs(*max_v, *max_e)?
            .into_iter()
            .enumerate()
            .map(|(i, graph)| CorpusItem {
                id: format!("n{}m{}-{i:06}", graph.num_vertices(), graph.num_edges()),
                graph,
            })
            .collect(),
        CorpusSpec::Random { seed, v, e, neg_prob } => vec![CorpusItem {
            id: format!("random-{seed}"),
            graph: random_signed_graph(*seed, *v, *e, *neg_prob)?,
        }],
    };
    Ok(items)
}

/// Petersen graph: inner vertices 1-5, outer 6-10. The outer 5-cycle and
/// the spokes are positive, the inner pentagram is negative.
pub fn signed_petersen() -> SignedGraph {
    let mut t = Vec::new();
    for i in 0..5 {
        t.push((i, i + 5, Sign::Positive));
    }
    for i in 0..5 {
        t.push((5 + i, 5 + (i + 1) % 5, Sign::Positive));
    }
    for i in 0..5 {
        t.push((i, (i + 2) % 5, Sign::Negative));
    }
    SignedGraph::from_triples(10, &t).expect("valid Petersen")
}

/// `t` copies of `K_4` sharing the edge `v1v2`, with that edge replaced by
/// a negative loop at each of `v1` (vertex 0) and `v2` (vertex 1). Copy `i`
/// adds vertices `2 + 2i` and `3 + 2i`.
pub fn g_family(t: usize) -> Result<SignedGraph> {
    if t < 1 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    let mut triples = vec![(0, 0, Sign::Negative), (1, 1, Sign::Negative)];
    for i in 0..t {
        let (a, b) = (2 + 2 * i, 3 + 2 * i);
        triples.extend([
            (0, a, Sign::Positive),
            (0, b, Sign::Positive),
            (1, a, Sign::Positive),
            (1, b, Sign::Positive),
            (a, b, Sign::Positive),
        ]);
    }
    SignedGraph::from_triples(2 + 2 * t, &triples)
}

/// A circular 3-flow of `g_family(t)` with value `3/2` on both loops and
/// values of absolute value 1 or 2 elsewhere.
pub fn g_family_circular_witness(t: usize) -> Result<FlowAssignment> {
    let g = g_family(t)?;
    // search in half units: loops carry 3, other edges 2 or 4
    let domains: Vec<Vec<i64>> = g
        .edges()
        .iter()
        .map(|e| if e.is_loop() { vec![3, -3] } else { vec![2, -2, 4, -4] })
        .collect();
    let f = find_flow_with_domains(&g, &domains, &Limits::default())?
        .ok_or_else(|| Error::InvariantViolation("no half-integral circular 3-flow found".into()))?;
    let half = ratio(1, 2);
    let values = f.values.iter().map(|v| v * &half).collect();
    Ok(FlowAssignment::new(f.orientation, values))
}

/// The wheel with hub 0 and rim 1..=5: spokes first, then rim edges.
pub fn w5_underlying() -> SignedGraph {
    let mut t = Vec::new();
    for i in 1..=5 {
        t.push((0, i, Sign::Positive));
    }
    for i in 1..=5 {
        t.push((i, i % 5 + 1, Sign::Positive));
    }
    SignedGraph::from_triples(6, &t).expect("valid wheel")
}

/// One representative per switching class of signatures on `W_5`.
pub fn w5_all_signatures() -> Vec<SignedGraph> {
    switching_class_representatives(&w5_underlying())
}

/// All signatures of `g` with the BFS spanning forest positive; these are
/// pairwise switching inequivalent and cover every switching class.
pub fn switching_class_representatives(g: &SignedGraph) -> Vec<SignedGraph> {
    let tree = spanning_forest_edges(g);
    let free: Vec<usize> = (0..g.num_edges()).filter(|e| !tree.contains(e)).collect();
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0u64..(1u64 << free.len()) {
        let mut signs = vec![Sign::Positive; g.num_edges()];
        for (bit, &e) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                signs[e] = Sign::Negative;
            }
        }
        out.push(g.with_signs(&signs));
    }
    out
}

fn spanning_forest_edges(g: &SignedGraph) -> BTreeSet<usize> {
    let mut seen = vec![false; g.num_vertices()];
    let mut tree = BTreeSet::new();
    for r in 0..g.num_vertices() {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut queue = std::collections::VecDeque::from([r]);
        while let Some(v) = queue.pop_front() {
            for h in g.half_edges_at(v) {
                let w = g.edge(h.edge).opposite(v);
                if !seen[w] {
                    seen[w] = true;
                    tree.insert(h.edge);
                    queue.push_back(w);
                }
            }
        }
    }
    tree
}

/// Every connected signed multigraph (loops and parallel edges allowed)
/// with `1..=max_v` vertices and `1..=max_e` edges, one per class under
/// isomorphism and switching. Graphs come ordered by vertex count, edge
/// count, then canonical form.
pub fn enumerate_signed_graphs(max_v: usize, max_e: usize) -> Result<Vec<SignedGraph>> {
    if max_v > MAX_ENUM_VERTICES || max_e > MAX_ENUM_EDGES {
        return Err(Error::InvalidParameter(format!(
            "enumeration bounds ({max_v}, {max_e}) exceed ({MAX_ENUM_VERTICES}, {MAX_ENUM_EDGES})"
        )));
    }
    let mut out = Vec::new();
    for n in 1..=max_v {
        for m in n.saturating_sub(1).max(1)..=max_e {
            for g in underlying_graphs(n, m) {
                out.extend(signed_classes(&g));
            }
        }
    }
    Ok(out)
}

type Pair = (usize, usize);

/// All permutations of `0..n` preserving the given degree sequence.
fn degree_preserving_perms(deg: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; deg.len()];
    let mut used = vec![false; deg.len()];
    fn rec(i: usize, deg: &[usize], perm: &mut [usize], used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if i == deg.len() {
            out.push(perm.to_vec());
            return;
        }
        for j in 0..deg.len() {
            if !used[j] && deg[j] == deg[i] {
                used[j] = true;
                perm[i] = j;
                rec(i + 1, deg, perm, used, out);
                used[j] = false;
            }
        }
    }
    rec(0, deg, &mut perm, &mut used, &mut out);
    out
}

fn relabel(edges: &[Pair], perm: &[usize]) -> Vec<Pair> {
    let mut r: Vec<Pair> = edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (perm[u], perm[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    r.sort_unstable();
    r
}

/// Connected multigraphs on `n` vertices with `m` edges up to isomorphism,
/// as canonical sorted pair lists. Candidates are edge multisets whose
/// degree sequence is non-decreasing in the vertex index; the canonical
/// form is the least relabelling under degree-preserving permutations.
fn underlying_graphs(n: usize, m: usize) -> Vec<SignedGraph> {
    let pairs: Vec<Pair> = (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect();
    let mut seen: BTreeSet<Vec<Pair>> = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    let mut deg = vec![0usize; n];
    let mut perms_cache: std::collections::HashMap<Vec<usize>, Vec<Vec<usize>>> = Default::default();
    fn rec(
        start: usize,
        m: usize,
        pairs: &[Pair],
        chosen: &mut Vec<usize>,
        deg: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], &[usize]),
    ) {
        if chosen.len() == m {
            visit(chosen, deg);
            return;
        }
        for i in start..pairs.len() {
            let (u, v) = pairs[i];
            deg[u] += 1;
            deg[v] += 1;
            chosen.push(i);
            rec(i, m, pairs, chosen, deg, visit);
            chosen.pop();
            deg[u] -= 1;
            deg[v] -= 1;
        }
    }
    let mut visit = |idx: &[usize], deg: &[usize]| {
        if deg.iter().any(|&d| d == 0) || deg.windows(2).any(|w| w[0] > w[1]) {
            return;
        }
        let edges: Vec<Pair> = idx.iter().map(|&i| pairs[i]).collect();
        if !connected(n, &edges) {
            return;
        }
        let perms = perms_cache.entry(deg.to_vec()).or_insert_with(|| degree_preserving_perms(deg));
        let canon = perms.iter().map(|p| relabel(&edges, p)).min().expect("identity permutation");
        seen.insert(canon);
    };
    if n == 1 && m == 0 {
        return Vec::new();
    }
    rec(0, m, &pairs, &mut chosen, &mut deg, &mut visit);
    seen.into_iter()
        .map(|edges| {
            let es = edges.iter().map(|&(u, v)| Edge::new(u, v, Sign::Positive)).collect();
            SignedGraph::new(n, es).expect("valid pairs")
        })
        .collect()
}

fn connected(n: usize, edges: &[Pair]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut comps = n;
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            comps -= 1;
        }
    }
    comps == 1
}

/// Switching-class representatives of an underlying graph, with classes
/// related by an automorphism merged.
fn signed_classes(g: &SignedGraph) -> Vec<SignedGraph> {
    let n = g.num_vertices();
    let edges: Vec<Pair> = g.edges().iter().map(|e| (e.ends[0], e.ends[1])).collect();
    let deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let sorted = relabel(&edges, &(0..n).collect::<Vec<_>>());
    let autos: Vec<Vec<usize>> = degree_preserving_perms(&deg)
        .into_iter()
        .filter(|p| relabel(&edges, p) == sorted)
        .collect();
    let mut seen: BTreeSet<Vec<(usize, usize, i8)>> = BTreeSet::new();
    let mut out = Vec::new();
    for rep in switching_class_representatives(g) {
        let key = signed_key(&rep, &autos);
        if seen.insert(key) {
            out.push(rep);
        }
    }
    out
}

/// Least sorted `(u, v, sign)` list over automorphisms and switchings that
/// fix vertex 0 (switching everything is the identity on signs).
fn signed_key(g: &SignedGraph, autos: &[Vec<usize>]) -> Vec<(usize, usize, i8)> {
    let n = g.num_vertices();
    let mut best: Option<Vec<(usize, usize, i8)>> = None;
    for p in autos {
        for mask in 0u32..(1u32 << (n - 1)) {
            let switched = |v: usize| v > 0 && (mask >> (v - 1)) & 1 == 1;
            let mut key: Vec<(usize, usize, i8)> = g
                .edges()
                .iter()
                .map(|e| {
                    let [u, v] = e.ends;
                    let mut s = e.sign.value() as i8;
                    if u != v && switched(u) != switched(v) {
                        s = -s;
                    }
                    let (a, b) = (p[u], p[v]);
                    (a.min(b), a.max(b), s)
                })
                .collect();
            key.sort_unstable();
            if best.as_ref().map_or(true, |b| key < *b) {
                best = Some(key);
            }
        }
    }
    best.expect("identity automorphism")
}

/// `v` vertices and `e` edges with endpoints drawn uniformly (loops
/// allowed) and each edge negative with probability `neg_prob`.
pub fn random_signed_graph(seed: u64, v: usize, e: usize, neg_prob: f64) -> Result<SignedGraph> {
    if v == 0 || !(0.0..=1.0).contains(&neg_prob) {
        return Err(Error::InvalidParameter("need v ≥ 1 and 0 ≤ neg_prob ≤ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..e)
        .map(|_| {
            let a = rng.gen_range(0..v);
            let b = rng.gen_range(0..v);
            let sign = if rng.gen_bool(neg_prob) { Sign::Negative } else { Sign::Positive };
            Edge::new(a.min(b), a.max(b), sign)
        })
        .collect();
    SignedGraph::new(v, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balance::switching_normal_form;
    use crate::flow::{check_flow, FlowKind};

    #[test]
    fn petersen_shape() {
        let g = signed_petersen();
        assert_eq!((g.num_vertices(), g.num_edges(), g.num_negative()), (10, 15, 5));
        assert!(g.is_cubic());
    }

    #[test]
    fn g_family_shape() {
        let g1 = g_family(1).unwrap();
        assert_eq!((g1.num_vertices(), g1.num_edges(), g1.num_negative()), (4, 7, 2));
        let g2 = g_family(2).unwrap();
        assert_eq!((g2.num_vertices(), g2.num_edges(), g2.num_negative()), (6, 12, 2));
        assert!(g_family(0).is_err());
    }

    #[test]
    fn g_family_witness_is_circular_3_flow() {
        for t in 1..=3 {
            let g = g_family(t).unwrap();
            let f = g_family_circular_witness(t).unwrap();
            assert_eq!(check_flow(&g, &f, &FlowKind::Circular { r: "3".into() }).unwrap(), None);
            assert_eq!(f.values[0], ratio(3, 2));
        }
    }

    #[test]
    fn w5_classes() {
        let all = w5_all_signatures();
        assert_eq!(all.len(), 32);
        let forms: BTreeSet<String> = all.iter().map(|g| switching_normal_form(g).0.to_text()).collect();
        assert_eq!(forms.len(), 32);
    }

    #[test]
    fn tiny_enumerations() {
        let one = enumerate_signed_graphs(1, 1).unwrap();
        assert_eq!(one.len(), 2);
        assert!(one.iter().all(|g| g.num_edges() == 1 && g.edge(0).is_loop()));
        // one loop: 2; two loops: 3; single edge: 1; digon: 2; edge + loop: 2
        assert_eq!(enumerate_signed_graphs(2, 2).unwrap().len(), 10);
        assert!(enumerate_signed_graphs(7, 3).is_err());
    }

    #[test]
    fn simple_graph_counts() {
        // connected simple graphs on 4 vertices with 3..=6 edges: 2 + 2 + 1 + 1 = 6 up to isomorphism
        let count = (3..=6)
            .flat_map(|m| underlying_graphs(4, m))
            .filter(|g| g.edges().iter().all(|e| !e.is_loop()) && {
                let mut p: Vec<_> = g.edges().iter().map(|e| e.ends).collect();
                p.sort_unstable();
                p.windows(2).all(|w| w[0] != w[1])
            })
            .count();
        assert_eq!(count, 6);
    }

    #[test]
    fn random_is_seeded() {
        let a = random_signed_graph(7, 5, 8, 0.3).unwrap();
        let b = random_signed_graph(7, 5, 8, 0.3).unwrap();
        assert_eq!(a, b);
    }
}
