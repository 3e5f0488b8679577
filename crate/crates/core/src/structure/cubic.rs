//! Predicates on cubic graphs.

use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::limits::Limits;
use crate::structure::circuit::Circuit;

fn require_cubic(g: &SignedGraph) -> Result<()> {
    if !g.is_cubic() || g.edges().iter().any(|e| e.is_loop()) {
        return Err(Error::NotCubic);
    }
    Ok(())
}

/// A proper 3-edge-coloring (colors 0, 1, 2), by exact backtracking.
pub fn three_edge_coloring(g: &SignedGraph) -> Result<Option<Vec<u8>>> {
    three_edge_coloring_with(g, Limits::global())
}

pub fn three_edge_coloring_with(g: &SignedGraph, limits: &Limits) -> Result<Option<Vec<u8>>> {
    require_cubic(g)?;
    let m = g.num_edges();
    let order = bfs_edge_order(g);
    let mut color = vec![u8::MAX; m];
    let mut used = vec![[false; 3]; g.num_vertices()];
    let mut next = vec![0u8; m];
    let mut depth = 0usize;
    let mut nodes = 0u64;
    while depth < m {
        let e = order[depth];
        let [u, v] = g.edge(e).ends;
        if color[e] != u8::MAX {
            let c = color[e] as usize;
            used[u][c] = false;
            used[v][c] = false;
            color[e] = u8::MAX;
        }
        let mut placed = false;
        while next[depth] < 3 {
            let c = next[depth] as usize;
            next[depth] += 1;
            if !used[u][c] && !used[v][c] {
                used[u][c] = true;
                used[v][c] = true;
                color[e] = c as u8;
                placed = true;
                break;
            }
        }
        nodes += 1;
        if nodes > limits.search_nodes {
            return Err(Error::ResourceCap { what: "edge-coloring search", limit: limits.search_nodes });
        }
        if placed {
            depth += 1;
            if depth < m {
                next[depth] = 0;
            }
        } else {
            if depth == 0 {
                return Ok(None);
            }
            depth -= 1;
        }
    }
    Ok(Some(color))
}

/// Edges in breadth-first discovery order from vertex 0 (then any
/// remaining components), each vertex's edges in id order.
fn bfs_edge_order(g: &SignedGraph) -> Vec<usize> {
    let mut seen_v = vec![false; g.num_vertices()];
    let mut seen_e = vec![false; g.num_edges()];
    let mut order = Vec::with_capacity(g.num_edges());
    for r in 0..g.num_vertices() {
        if seen_v[r] {
            continue;
        }
        seen_v[r] = true;
        let mut queue = std::collections::VecDeque::from([r]);
        while let Some(v) = queue.pop_front() {
            for h in g.half_edges_at(v) {
                if !seen_e[h.edge] {
                    seen_e[h.edge] = true;
                    order.push(h.edge);
                }
                let w = g.edge(h.edge).opposite(v);
                if !seen_v[w] {
                    seen_v[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// Checks a 3-edge-coloring by direct substitution.
pub fn is_proper_3_edge_coloring(g: &SignedGraph, colors: &[u8]) -> bool {
    colors.len() == g.num_edges()
        && colors.iter().all(|&c| c < 3)
        && (0..g.num_vertices()).all(|v| {
            let mut seen = [false; 3];
            g.half_edges_at(v).iter().all(|h| !std::mem::replace(&mut seen[colors[h.edge] as usize], true))
        })
}

/// A 2-factor each of whose circuits is antibalanced, found as the
/// complement of a perfect matching. Returns the sorted edges of the
/// 2-factor.
pub fn find_antibalanced_2_factor(g: &SignedGraph) -> Result<Option<Vec<usize>>> {
    require_cubic(g)?;
    let limits = Limits::global();
    let n = g.num_vertices();
    let mut in_matching = vec![false; g.num_edges()];
    let mut matched = vec![false; n];
    let mut nodes = 0u64;
    let mut result = None;
    search_matchings(g, &mut matched, &mut in_matching, &mut nodes, limits.search_nodes, &mut |m| {
        let factor: Vec<usize> = (0..g.num_edges()).filter(|&e| !m[e]).collect();
        if factor_is_antibalanced(g, &factor) {
            result = Some(factor);
            true
        } else {
            false
        }
    })?;
    Ok(result)
}

/// Every circuit of the 2-factor has an even number of positive edges.
pub fn factor_is_antibalanced(g: &SignedGraph, factor: &[usize]) -> bool {
    let (sub, map) = g.edge_subgraph(factor);
    sub.connected_components().into_iter().all(|comp| {
        let edges: Vec<usize> = (0..sub.num_edges())
            .filter(|&e| comp.binary_search(&sub.edge(e).ends[0]).is_ok())
            .map(|e| map[e])
            .collect();
        if edges.is_empty() {
            return true;
        }
        Circuit::from_edges(g, &edges)
            .is_some_and(|c| (c.len() - c.num_negative(g)) % 2 == 0)
    })
}

/// Visits perfect matchings, matching the smallest unmatched vertex first;
/// stops when `visit` returns `true`.
fn search_matchings(
    g: &SignedGraph,
    matched: &mut [bool],
    in_matching: &mut [bool],
    nodes: &mut u64,
    cap: u64,
    visit: &mut dyn FnMut(&[bool]) -> bool,
) -> Result<bool> {
    *nodes += 1;
    if *nodes > cap {
        return Err(Error::ResourceCap { what: "perfect-matching search", limit: cap });
    }
    let Some(v) = matched.iter().position(|&m| !m) else {
        return Ok(visit(in_matching));
    };
    matched[v] = true;
    for h in g.half_edges_at(v) {
        let w = g.edge(h.edge).opposite(v);
        if matched[w] {
            continue;
        }
        matched[w] = true;
        in_matching[h.edge] = true;
        let stop = search_matchings(g, matched, in_matching, nodes, cap, visit)?;
        in_matching[h.edge] = false;
        matched[w] = false;
        if stop {
            matched[v] = false;
            return Ok(true);
        }
    }
    matched[v] = false;
    Ok(false)
}
